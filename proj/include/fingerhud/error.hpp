#pragma once

#include <stdexcept>
#include <string>

namespace fingerhud {

// Base for every error the library throws. Callers that only need a message
// can catch this; the subclasses exist so tests and the CLI can tell
// categories apart.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside a declared domain (bend range, counts, config bounds).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed layout/scenario/params documents.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Data that cannot be analysed (inverted timestamps, empty windows, degenerate samples).
class DataError : public Error {
public:
    using Error::Error;
};

class UnreachableGoal : public Error {
public:
    using Error::Error;
};

class DeviceOff : public Error {
public:
    using Error::Error;
};

// Manifest and stored parameters disagree.
class IntegrityError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace fingerhud
