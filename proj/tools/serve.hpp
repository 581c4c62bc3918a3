#pragma once

#include <string>

#include "fingerhud/session.hpp"

namespace fingerhud {

struct ServeOptions {
    std::string host = "127.0.0.1";
    unsigned short port = 8765;
    std::string out_dir;
    double tick_ms = 50.0;
    SessionConfig session;
};

// Blocks serving websocket sessions until the process is stopped.
int serve(const ServeOptions& options);

}  // namespace fingerhud
