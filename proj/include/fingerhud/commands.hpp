#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fingerhud/report.hpp"
#include "fingerhud/study.hpp"

namespace fingerhud {

std::string tool_version();

// Output directory when --out is not given: $FINGERHUD_OUT, else "fingerhud-out".
std::string default_out_dir();

struct RunOptions {
    std::vector<int> roads;
    std::vector<std::string> scenario_files;
    std::string condition = "all";  // baseline | tactile | gesture | all
    int subjects = 32;
    std::uint64_t seed = 42;
    std::string out_dir;
    std::optional<std::string> params_file;
    bool serial = false;
};

struct RunResult {
    std::size_t runs = 0;
    StudyReport report;
    std::string report_text;
};

// Writes runs/*.log, manifest.json, metrics.csv, report.txt and report.json.
RunResult cmd_run(const RunOptions& options);

struct ReportOptions {
    std::string in_dir;
    std::string format = "text";  // text | json | csv
    std::optional<std::string> ratings_file;
};

struct ReportResult {
    StudyReport report;
    std::vector<MetricRow> rows;
    std::vector<std::string> written;
    std::string text;
};

// Recomputes every metric from the logs listed in the manifest. Throws
// IntegrityError when the stored parameters do not hash to the recorded value
// or a log header disagrees with its manifest entry.
ReportResult cmd_report(const ReportOptions& options);

struct ReplayResult {
    bool ok = false;
    std::string message;
};

// Session logs are fed back through a fresh session and the menu traces
// compared. Simulation logs are re-simulated from their manifest (found next
// to the runs directory unless given) and compared byte for byte.
ReplayResult cmd_replay(const std::string& log_path, const std::optional<std::string>& manifest_dir = std::nullopt,
                        const std::optional<std::string>& layout_file = std::nullopt);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

nlohmann::json manifest_json(const StudyPlan& plan);
std::vector<Condition> parse_conditions(const std::string& text);

}  // namespace fingerhud
