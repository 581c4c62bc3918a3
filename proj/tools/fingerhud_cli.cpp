#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fingerhud/commands.hpp"
#include "fingerhud/error.hpp"
#include "fingerhud/layout.hpp"
#include "fingerhud/scenario.hpp"
#include "serve.hpp"

using namespace fingerhud;

namespace {

constexpr int kExitError = 1;
constexpr int kExitIntegrity = 3;
constexpr int kExitMismatch = 4;

const char* kKeyHelp =
    "Virtual glove keys (held = finger spread), thumb to little finger:\n"
    "  left hand:  g f d s a\n"
    "  right hand: h j k l ;\n";

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text_file(out, text);
    }
}

Scenario pick_scenario(std::optional<int> road, const std::string& file) {
    if (!file.empty()) return load_scenario(read_json_file(file));
    return builtin_scenario(road.value_or(1));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fingerhud: finger-count gesture HUD engine, driving-study simulator and analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());
    app.footer(kKeyHelp);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Simulate a study and write logs, metrics and the report");
    run_cmd->add_option("--road", run.roads, "Built-in road id (1, 2, 3); repeatable");
    run_cmd->add_option("--scenario", run.scenario_files, "Scenario document (JSON); repeatable");
    run_cmd->add_option("--condition", run.condition, "baseline | tactile | gesture | all")
        ->check(CLI::IsMember({"baseline", "tactile", "gesture", "all"}))
        ->capture_default_str();
    run_cmd->add_option("--subjects", run.subjects, "Synthetic subjects (at least 2)")->capture_default_str();
    run_cmd->add_option("--seed", run.seed, "Study seed")->capture_default_str();
    run_cmd->add_option("--out", run.out_dir, "Output directory")->envname("FINGERHUD_OUT");
    std::string params_file;
    run_cmd->add_option("--params", params_file, "Driver parameter document (JSON)");
    run_cmd->add_flag("--serial", run.serial, "Simulate runs one after another");

    ReportOptions report;
    std::string ratings_file;
    auto* report_cmd = app.add_subcommand("report", "Recompute metrics and statistics from a run directory");
    report_cmd->add_option("--in", report.in_dir, "Run directory containing manifest.json")
        ->envname("FINGERHUD_OUT");
    report_cmd->add_option("--format", report.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    report_cmd->add_option("--ratings", ratings_file, "Ratings CSV: subject,item,condition,score");

    std::string replay_log, replay_manifest, replay_layout;
    auto* replay_cmd = app.add_subcommand("replay", "Re-drive a session log or re-simulate a run log and compare");
    replay_cmd->add_option("log", replay_log, "Log file")->required();
    replay_cmd->add_option("--manifest-dir", replay_manifest, "Directory holding manifest.json");
    replay_cmd->add_option("--layout", replay_layout, "Layout document used by the session");

    ServeOptions serve_opts;
    std::optional<int> serve_road;
    std::string serve_scenario, serve_layout;
    bool no_prompts = false;
    auto* serve_cmd = app.add_subcommand("serve", "Run the live websocket session service");
    serve_cmd->add_option("--host", serve_opts.host)->capture_default_str();
    serve_cmd->add_option("--port", serve_opts.port)->capture_default_str();
    serve_cmd->add_option("--road", serve_road, "Built-in road for task prompts (default 1)");
    serve_cmd->add_option("--scenario", serve_scenario, "Scenario document for task prompts");
    serve_cmd->add_option("--layout", serve_layout, "Layout document");
    serve_cmd->add_option("--out", serve_opts.out_dir, "Directory for session logs");
    serve_cmd->add_option("--heartbeat-ms", serve_opts.session.heartbeat_ms)->capture_default_str();
    serve_cmd->add_flag("--no-prompts", no_prompts, "Do not issue task prompts");

    std::optional<int> exp_road;
    std::string exp_scenario, exp_format = "json", exp_out;
    auto* exp_sc = app.add_subcommand("export-scenario", "Write a scenario document or its task table");
    exp_sc->add_option("--road", exp_road, "Built-in road id");
    exp_sc->add_option("--scenario", exp_scenario, "Scenario document to normalise");
    exp_sc->add_option("--format", exp_format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    exp_sc->add_option("--out", exp_out, "Output file (default stdout)");

    std::string lay_in, lay_out;
    auto* exp_lay = app.add_subcommand("export-layout", "Write the menu layout document (default layout unless --layout)");
    exp_lay->add_option("--layout", lay_in, "Layout document to validate and normalise");
    exp_lay->add_option("--out", lay_out, "Output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            if (!params_file.empty()) run.params_file = params_file;
            const auto res = cmd_run(run);
            std::cout << res.report_text;
            std::cerr << res.runs << " runs written to "
                      << (run.out_dir.empty() ? default_out_dir() : run.out_dir) << "\n";
        } else if (*report_cmd) {
            if (report.in_dir.empty()) report.in_dir = default_out_dir();
            if (!ratings_file.empty()) report.ratings_file = ratings_file;
            const auto res = cmd_report(report);
            std::cout << res.text;
            for (const auto& f : res.written) std::cerr << "wrote " << f << "\n";
        } else if (*replay_cmd) {
            const auto res = cmd_replay(replay_log,
                                        replay_manifest.empty() ? std::nullopt : std::optional(replay_manifest),
                                        replay_layout.empty() ? std::nullopt : std::optional(replay_layout));
            std::cout << res.message << "\n";
            return res.ok ? 0 : kExitMismatch;
        } else if (*serve_cmd) {
            serve_opts.session.scenario = pick_scenario(serve_road, serve_scenario);
            if (!serve_layout.empty()) serve_opts.session.layout = load_layout(read_json_file(serve_layout));
            serve_opts.session.prompts = !no_prompts;
            return serve(serve_opts);
        } else if (*exp_sc) {
            const auto sc = pick_scenario(exp_road, exp_scenario);
            emit(exp_format == "csv" ? tasks_to_csv(sc) : scenario_to_json(sc).dump(2) + "\n", exp_out);
        } else if (*exp_lay) {
            const auto layout = lay_in.empty() ? default_layout() : load_layout(read_json_file(lay_in));
            emit(export_layout(layout).dump(2) + "\n", lay_out);
        }
    } catch (const IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return 0;
}
