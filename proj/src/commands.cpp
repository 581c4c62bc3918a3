#include "fingerhud/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fingerhud/error.hpp"
#include "fingerhud/session.hpp"

#ifndef FINGERHUD_VERSION
#define FINGERHUD_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace fingerhud {

using nlohmann::json;

std::string tool_version() { return FINGERHUD_VERSION; }

std::string default_out_dir() {
    if (const char* env = std::getenv("FINGERHUD_OUT"); env && *env) return env;
    return "fingerhud-out";
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
    if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<Condition> parse_conditions(const std::string& text) {
    if (text == "all") return {std::begin(kAllConditions), std::end(kAllConditions)};
    return {condition_from_string(text)};
}

json manifest_json(const StudyPlan& plan) {
    json m;
    m["schema"] = "fingerhud-manifest";
    m["version"] = 1;
    m["tool_version"] = tool_version();
    m["seed"] = plan.seed;
    m["subjects"] = plan.n_subjects;
    m["conditions"] = json::array();
    for (auto c : plan.conditions) m["conditions"].push_back(std::string(to_string(c)));
    m["roads"] = json::array();
    m["scenarios"] = json::array();
    for (const auto& s : plan.scenarios) {
        m["roads"].push_back(s.road.id);
        m["scenarios"].push_back(scenario_to_json(s));
    }
    m["params"] = params_to_json(plan.params);
    m["param_hash"] = hex_hash(param_hash(plan.params));
    m["runs"] = json::array();
    for (const auto& r : plan.runs) {
        m["runs"].push_back({{"file", "runs/" + r.file_name()},
                             {"subject", r.subject},
                             {"condition", std::string(to_string(r.condition))},
                             {"road", r.road_id},
                             {"seed", r.seed}});
    }
    return m;
}

namespace {

void write_outputs(const fs::path& dir, const StudyReport& report, const std::vector<MetricRow>& rows) {
    write_text_file((dir / "metrics.csv").string(), metrics_to_csv(rows));
    write_text_file((dir / "report.txt").string(), report_to_text(report));
    write_text_file((dir / "report.json").string(), report_to_json(report).dump(2) + "\n");
}

StudyPlan plan_from_manifest(const json& m) {
    if (m.value("schema", "") != "fingerhud-manifest") throw IntegrityError("not a fingerhud manifest");
    const auto params = params_from_json(m.at("params"));
    const auto stored = m.at("param_hash").get<std::string>();
    const auto actual = hex_hash(param_hash(params));
    if (stored != actual) {
        throw IntegrityError("parameter hash mismatch: manifest records " + stored + ", stored parameters hash to " +
                             actual);
    }
    std::vector<Scenario> scenarios;
    for (const auto& s : m.at("scenarios")) scenarios.push_back(load_scenario(s));
    std::vector<Condition> conds;
    for (const auto& c : m.at("conditions")) conds.push_back(condition_from_string(c.get<std::string>()));
    auto plan = study_plan(std::move(scenarios), conds, m.at("subjects").get<int>(), params, m.at("seed").get<std::uint64_t>());
    if (plan.runs.size() != m.at("runs").size()) throw IntegrityError("manifest run list does not match its design");
    for (std::size_t i = 0; i < plan.runs.size(); ++i) {
        const auto& e = m["runs"][i];
        const auto& r = plan.runs[i];
        if (e.at("seed").get<std::uint64_t>() != r.seed || e.at("subject").get<int>() != r.subject ||
            e.at("road").get<int>() != r.road_id || e.at("condition").get<std::string>() != to_string(r.condition) ||
            e.at("file").get<std::string>() != "runs/" + r.file_name()) {
            throw IntegrityError("manifest run " + std::to_string(i + 1) + " does not match the derived plan");
        }
    }
    return plan;
}

}  // namespace

RunResult cmd_run(const RunOptions& o) {
    std::vector<Scenario> scenarios;
    for (int id : o.roads) scenarios.push_back(builtin_scenario(id));
    for (const auto& f : o.scenario_files) scenarios.push_back(load_scenario(read_json_file(f)));
    if (scenarios.empty()) throw ValidationError("choose at least one --road or --scenario");
    std::set<int> ids;
    for (const auto& s : scenarios) {
        if (!ids.insert(s.road.id).second) throw ValidationError("road " + std::to_string(s.road.id) + " given twice");
    }
    const auto params = o.params_file ? params_from_json(read_json_file(*o.params_file)) : default_params();
    const auto plan = study_plan(std::move(scenarios), parse_conditions(o.condition), o.subjects, params, o.seed);

    const fs::path dir = o.out_dir.empty() ? fs::path(default_out_dir()) : fs::path(o.out_dir);
    std::error_code ec;
    fs::create_directories(dir / "runs", ec);
    if (ec) throw DataError("cannot create output directory '" + dir.string() + "': " + ec.message());

    const auto sink = [&](std::size_t i, const RunLog& log) {
        write_runlog_file((dir / "runs" / plan.runs[i].file_name()).string(), log);
    };
    const auto ds = o.serial ? simulate_study_serial(plan, sink) : simulate_study(plan, sink);
    write_text_file((dir / "manifest.json").string(), manifest_json(plan).dump(2) + "\n");

    RunResult res;
    res.runs = plan.runs.size();
    const auto rows = ds.metric_rows();
    res.report = build_report(rows);
    res.report_text = report_to_text(res.report);
    write_outputs(dir, res.report, rows);
    return res;
}

ReportResult cmd_report(const ReportOptions& o) {
    const fs::path dir(o.in_dir);
    const auto manifest = read_json_file((dir / "manifest.json").string());
    ReportResult res;
    if (manifest.value("schema", "") == "fingerhud-session-manifest") {
        const auto stored = manifest.at("param_hash").get<std::string>();
        if (stored != hex_hash(param_hash(params_from_json(manifest.at("params"))))) {
            throw IntegrityError("parameter hash mismatch in session manifest");
        }
        for (const auto& e : manifest.at("sessions")) {
            const auto log = read_runlog_file((dir / e.at("file").get<std::string>()).string());
            const auto rows = compute_run_metrics(log, e.at("subject").get<int>(), Condition::Gesture,
                                                  e.at("road").get<int>())
                                  .rows();
            res.rows.insert(res.rows.end(), rows.begin(), rows.end());
        }
    }
    const auto plan = res.rows.empty() && manifest.value("schema", "") != "fingerhud-session-manifest"
                          ? plan_from_manifest(manifest)
                          : StudyPlan{};
    for (std::size_t i = 0; i < plan.runs.size(); ++i) {
        const auto& r = plan.runs[i];
        const auto log = read_runlog_file((dir / "runs" / r.file_name()).string());
        const auto& h = log.header;
        if (h.seed != r.seed || h.road_id != r.road_id || h.subject != r.subject || h.condition != to_string(r.condition)) {
            throw IntegrityError("log runs/" + r.file_name() + " does not match its manifest entry");
        }
        const auto rows = compute_run_metrics(log, r.subject, r.condition, r.road_id).rows();
        res.rows.insert(res.rows.end(), rows.begin(), rows.end());
    }
    std::vector<RatingRow> ratings;
    if (o.ratings_file) ratings = parse_ratings_csv(read_text_file(*o.ratings_file), *o.ratings_file);
    res.report = build_report(res.rows, {}, ratings);
    res.text = report_to_text(res.report);
    if (o.format == "text") {
        write_text_file((dir / "report.txt").string(), res.text);
        res.written.push_back((dir / "report.txt").string());
    } else if (o.format == "json") {
        write_text_file((dir / "report.json").string(), report_to_json(res.report).dump(2) + "\n");
        res.written.push_back((dir / "report.json").string());
    } else if (o.format == "csv") {
        fs::create_directories(dir / "csv");
        for (const auto& [metric, text] : report_to_csv(res.report)) {
            const auto p = (dir / "csv" / (metric + ".csv")).string();
            write_text_file(p, text);
            res.written.push_back(p);
        }
    } else {
        throw ValidationError("unknown report format '" + o.format + "' (text, json, csv)");
    }
    write_text_file((dir / "metrics.csv").string(), metrics_to_csv(res.rows));
    return res;
}

ReplayResult cmd_replay(const std::string& log_path, const std::optional<std::string>& manifest_dir,
                        const std::optional<std::string>& layout_file) {
    const auto recorded = read_runlog_file(log_path);
    ReplayResult res;
    if (!recorded.session_events.empty()) {
        SessionConfig cfg;
        if (layout_file) cfg.layout = load_layout(read_json_file(*layout_file));
        const auto ids = builtin_road_ids();
        if (std::find(ids.begin(), ids.end(), recorded.header.road_id) != ids.end()) {
            cfg.scenario = builtin_scenario(recorded.header.road_id);
        }
        const auto again = replay_session(recorded, cfg);
        res.ok = again.menu_trace == recorded.menu_trace;
        res.message = res.ok ? "replay OK: " + std::to_string(again.menu_trace.size()) + " menu states match"
                             : "replay MISMATCH: recorded " + std::to_string(recorded.menu_trace.size()) +
                                   " menu states, replay produced " + std::to_string(again.menu_trace.size());
        return res;
    }
    const fs::path lp(log_path);
    const fs::path mdir = manifest_dir ? fs::path(*manifest_dir) : lp.parent_path().parent_path();
    const auto plan = plan_from_manifest(read_json_file((mdir / "manifest.json").string()));
    for (std::size_t i = 0; i < plan.runs.size(); ++i) {
        if (plan.runs[i].file_name() != lp.filename().string()) continue;
        const auto original = read_text_file(log_path);
        const auto again = runlog_to_string(simulate_planned(plan, i));
        res.ok = original == again;
        res.message = res.ok ? "replay OK: " + lp.filename().string() + " re-simulates byte for byte"
                             : "replay MISMATCH: " + lp.filename().string() + " differs from its re-simulation";
        return res;
    }
    throw IntegrityError("log '" + lp.filename().string() + "' is not listed in the manifest");
}

}  // namespace fingerhud
