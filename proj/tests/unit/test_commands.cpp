#include <doctest.h>

#include <filesystem>

#include "fingerhud/commands.hpp"
#include "fingerhud/error.hpp"
#include "fingerhud/session.hpp"
#include "helpers.hpp"

using namespace fingerhud;
namespace fs = std::filesystem;

namespace {

fs::path small_run(const std::string& name, int subjects = 2) {
    const auto dir = testutil::scratch_dir(name);
    RunOptions o;
    o.roads = {1};
    o.subjects = subjects;
    o.seed = 7;
    o.out_dir = dir.string();
    cmd_run(o);
    return dir;
}

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

}  // namespace

TEST_SUITE("commands") {
    TEST_CASE("run writes logs, manifest, metrics and report") {
        const auto dir = small_run("cmd-run");
        CHECK(fs::exists(dir / "manifest.json"));
        CHECK(fs::exists(dir / "metrics.csv"));
        CHECK(fs::exists(dir / "report.txt"));
        CHECK(fs::exists(dir / "report.json"));
        int logs = 0;
        for (const auto& e : fs::directory_iterator(dir / "runs")) logs += e.path().extension() == ".log";
        CHECK(logs == 6);
        const auto m = read_json_file((dir / "manifest.json").string());
        CHECK(m["runs"].size() == 6);
        CHECK(m["param_hash"] == hex_hash(param_hash(default_params())));
        CHECK(m["tool_version"] == tool_version());
        fs::remove_all(dir);
    }

    TEST_CASE("rerun is byte identical") {
        const auto a = small_run("cmd-det-a");
        const auto b = small_run("cmd-det-b");
        for (const auto& e : fs::directory_iterator(a / "runs")) {
            CHECK(slurp(e.path()) == slurp(b / "runs" / e.path().filename()));
        }
        for (const char* f : {"manifest.json", "metrics.csv", "report.txt", "report.json"}) {
            CHECK(slurp(a / f) == slurp(b / f));
        }
        RunOptions s;
        s.roads = {1};
        s.subjects = 2;
        s.seed = 7;
        s.serial = true;
        s.out_dir = testutil::scratch_dir("cmd-det-serial").string();
        cmd_run(s);
        CHECK(slurp(a / "report.json") == slurp(fs::path(s.out_dir) / "report.json"));
        for (const auto& d : {a, b, fs::path(s.out_dir)}) fs::remove_all(d);
    }

    TEST_CASE("report recomputes the same numbers") {
        const auto dir = small_run("cmd-report");
        const auto txt = slurp(dir / "report.txt");
        const auto json_before = slurp(dir / "report.json");
        const auto csv = slurp(dir / "metrics.csv");
        ReportOptions o;
        o.in_dir = dir.string();
        const auto r = cmd_report(o);
        CHECK(r.text == txt);
        CHECK(slurp(dir / "metrics.csv") == csv);
        o.format = "json";
        cmd_report(o);
        CHECK(slurp(dir / "report.json") == json_before);
        o.format = "csv";
        const auto w = cmd_report(o);
        CHECK(w.written.size() == metric_catalog().size());
        CHECK(fs::exists(dir / "csv" / "brake_rt.csv"));
        CHECK(fs::exists(dir / "csv" / "head_yaw.csv"));
        fs::remove_all(dir);
    }

    TEST_CASE("corrupted log line gives a line-numbered error") {
        const auto dir = small_run("cmd-corrupt");
        const auto victim = dir / "runs" / "road1-tactile-s02.log";
        auto text = slurp(victim);
        std::size_t pos = 0;
        for (int line = 1; line < 50; ++line) pos = text.find('\n', pos) + 1;
        text.replace(pos, 1, "Q");
        write_text_file(victim.string(), text);
        ReportOptions o;
        o.in_dir = dir.string();
        try {
            cmd_report(o);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 50);
            CHECK(std::string(e.what()).find("road1-tactile-s02.log:50") != std::string::npos);
        }
        fs::remove_all(dir);
    }

    TEST_CASE("parameter hash mismatch is an integrity error") {
        const auto dir = small_run("cmd-hash");
        auto m = read_json_file((dir / "manifest.json").string());
        m["params"]["baseline"]["brake_rt_mean_s"] = 1.5;
        write_text_file((dir / "manifest.json").string(), m.dump(2));
        ReportOptions o;
        o.in_dir = dir.string();
        CHECK_THROWS_WITH_AS(cmd_report(o), doctest::Contains("hash mismatch"), IntegrityError);

        m = read_json_file((dir / "manifest.json").string());
        m["params"]["baseline"]["brake_rt_mean_s"] = 1.0;
        m["runs"][0]["seed"] = 12345;
        write_text_file((dir / "manifest.json").string(), m.dump(2));
        CHECK_THROWS_AS(cmd_report(o), IntegrityError);
        fs::remove_all(dir);
    }

    TEST_CASE("swapped log is caught by its header") {
        const auto dir = small_run("cmd-swap");
        fs::copy_file(dir / "runs" / "road1-gesture-s01.log", dir / "runs" / "road1-gesture-s02.log",
                      fs::copy_options::overwrite_existing);
        ReportOptions o;
        o.in_dir = dir.string();
        CHECK_THROWS_AS(cmd_report(o), IntegrityError);
        fs::remove_all(dir);
    }

    TEST_CASE("one subject is rejected") {
        RunOptions o;
        o.roads = {1};
        o.subjects = 1;
        o.out_dir = testutil::scratch_dir("cmd-one").string();
        CHECK_THROWS_AS(cmd_run(o), ValidationError);
        o.subjects = 2;
        o.roads = {1, 1};
        CHECK_THROWS_AS(cmd_run(o), ValidationError);
        o.roads = {};
        CHECK_THROWS_AS(cmd_run(o), ValidationError);
        o.roads = {1};
        o.condition = "sideways";
        CHECK_THROWS(cmd_run(o));
    }

    TEST_CASE("replay re-simulates a run log") {
        const auto dir = small_run("cmd-replay");
        const auto log = (dir / "runs" / "road1-gesture-s01.log").string();
        auto r = cmd_replay(log);
        CHECK(r.ok);
        auto text = slurp(log);
        text.replace(text.rfind("\nH,") + 3, 1, "9");
        write_text_file(log, text);
        r = cmd_replay(log);
        CHECK_FALSE(r.ok);
        CHECK(r.message.find("MISMATCH") != std::string::npos);
        fs::remove_all(dir);
    }

    TEST_CASE("replay of a session log") {
        const auto dir = testutil::scratch_dir("cmd-session");
        SessionConfig cfg;
        cfg.prompts = false;
        Session s(cfg);
        s.open();
        double t = 0;
        for (const auto& keys : std::vector<std::vector<std::string>>{{"h"}, {}, {"h", "j"}, {}}) {
            for (int i = 0; i < 14; ++i) {
                t += 16.7;
                s.handle(nlohmann::json{{"v", 1}, {"type", "keys"}, {"t_ms", t}, {"pressed", keys}}.dump());
            }
        }
        const auto path = (dir / "session-001.log").string();
        write_runlog_file(path, s.log());
        auto r = cmd_replay(path);
        CHECK(r.ok);
        CHECK(r.message.find("2 menu states") != std::string::npos);

        auto log = s.log();
        log.menu_trace.pop_back();
        write_runlog_file(path, log);
        CHECK_FALSE(cmd_replay(path).ok);
        fs::remove_all(dir);
    }

    TEST_CASE("default output directory follows the environment") {
        ::setenv("FINGERHUD_OUT", "/tmp/somewhere", 1);
        CHECK(default_out_dir() == "/tmp/somewhere");
        ::unsetenv("FINGERHUD_OUT");
        CHECK(default_out_dir() == "fingerhud-out");
    }
}
