// One PASS/FAIL line per acceptance criterion. Usage: acceptance <cli> <datadir> <workdir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fingerhud/commands.hpp"
#include "fingerhud/menu.hpp"
#include "fingerhud/metrics.hpp"
#include "fingerhud/planner.hpp"
#include "fingerhud/recognizer.hpp"
#include "fingerhud/scenario.hpp"
#include "fingerhud/stats.hpp"
#include "oracles.hpp"

using namespace fingerhud;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void need(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

int failures = 0;

void criterion(const std::string& name, const std::function<std::string()>& body) {
    std::string detail;
    bool ok = true;
    try {
        detail = body();
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    if (!ok) ++failures;
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
}

// ---- metrics

std::string metric_oracles() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0, 1);
    for (int iter = 0; iter < 100; ++iter) {
        const auto log = oracle::random_log(rng, 2000);
        const double end = log.drive.back().t_s;
        std::vector<TimeWindow> ws;
        const int k = 1 + iter % 4;
        for (int i = 0; i < k; ++i) {
            const double a = u(rng) * end;
            ws.push_back({a, a + u(rng) * (end - a)});
        }
        ws.push_back(whole_run(log.drive)[0]);
        const double ref = log.header.ref_speed_kmh;
        need(close_rel(speed_rmse(log.drive, ref, ws), oracle::speed_rmse(log.drive, ref, ws), 1e-9),
             "speed_rmse differs on log " + std::to_string(iter));
        need(close_rel(lateral_rmse(log.drive, ws), oracle::lateral_rmse(log.drive, ws), 1e-9),
             "lateral_rmse differs on log " + std::to_string(iter));
        const auto e = eye_activity(log.gaze);
        const auto eo = oracle::eye_activity(log.gaze);
        need(close_rel(e.first, eo.first, 1e-9) && close_rel(e.second, eo.second, 1e-9),
             "eye_activity differs on log " + std::to_string(iter));
        for (auto a : {Aoi::Forward, Aoi::Console, Aoi::Other}) {
            need(close_rel(aoi_attention_ratio(log.gaze, a), oracle::aoi_ratio(log.gaze, a), 1e-9),
                 "aoi_attention_ratio differs on log " + std::to_string(iter));
        }
    }
    const double s = seconds_since(t0);
    need(s < 5.0, fmt("took %.2f s, limit 5 s", s));
    return fmt("100 logs within 1e-9 relative, %.2f s", s);
}

// ---- anova

std::string anova(const std::string& datadir) {
    using Matrix = std::vector<std::vector<double>>;
    std::mt19937_64 rng(62);
    std::normal_distribution<double> z(0, 1);
    Matrix m(32, std::vector<double>(3));
    for (auto& r : m)
        for (auto& x : r) x = 10 + z(rng);
    const auto r = rm_anova(m);
    need(r.df1 == 2 && r.df2 == 62, "df (" + std::to_string(r.df1) + "," + std::to_string(r.df2) + ") for n=32, k=3");

    std::ifstream in(datadir + "/anova_reference.json");
    need(bool(in), "cannot open anova_reference.json");
    const auto doc = nlohmann::json::parse(in);
    need(doc["cases"].size() == 20, "reference set does not hold 20 cases");
    double worst = 0;
    for (const auto& c : doc["cases"]) {
        const auto a = rm_anova(c["data"].get<Matrix>());
        need(a.df1 == c["df1"].get<int>() && a.df2 == c["df2"].get<int>(), "reference df mismatch");
        const double dF = std::abs(a.F - c["F"].get<double>()) / std::max(1.0, std::abs(a.F));
        const double dp = std::abs(a.p - c["p"].get<double>());
        worst = std::max({worst, dF, dp});
    }
    need(worst <= 1e-6, fmt("reference deviation %.3g > 1e-6", worst));

    double closure = 0;
    for (int iter = 0; iter < 50; ++iter) {
        const int n = 2 + iter % 40, k = 2 + iter % 5;
        Matrix x(n, std::vector<double>(k));
        for (auto& row : x) {
            const double s = 3 * z(rng);
            for (auto& v : row) v = 50 + s + z(rng);
        }
        const auto a = rm_anova(x);
        closure = std::max(closure, std::abs(a.ss_conditions + a.ss_subjects + a.ss_error - a.ss_total) /
                                        std::max(1.0, a.ss_total));
    }
    need(closure <= 1e-9, fmt("SS closure %.3g > 1e-9", closure));
    return fmt("df (2,62); 20 reference cases max deviation %.2g; SS closure %.2g", worst, closure);
}

// ---- wilcoxon

std::string wilcoxon() {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> z(0, 1);
    int cases = 0;
    double worst = 0;
    for (int iter = 0; iter < 600; ++iter) {
        const int n = 1 + iter % 12;
        std::vector<std::pair<double, double>> p;
        for (int i = 0; i < n; ++i) {
            double a = 5 + 2 * z(rng), d = 0.4 + 1.5 * z(rng);
            if (iter % 2 == 0) {
                a = std::round(a);
                d = std::round(2 * d);
            }
            p.emplace_back(a + d, a);
        }
        if (std::all_of(p.begin(), p.end(), [](auto q) { return q.first == q.second; })) continue;
        const auto w = wilcoxon_signed_rank(p);
        need(w.method == WilcoxonMethod::Exact, "n_eff <= 12 not exact");
        worst = std::max(worst, std::abs(w.p - oracle::signed_rank_enumerate_p(p)));
        ++cases;
    }
    need(worst < 1e-12, fmt("exact p deviates from enumeration by %.3g", worst));
    std::vector<std::pair<double, double>> unanimous;
    for (int i = 0; i < 32; ++i) unanimous.emplace_back(3.0 + 0.1 * i, 4.0 + 0.13 * i);
    const auto u = wilcoxon_signed_rank(unanimous);
    need(u.W == 0.0 && u.p < 0.001, fmt("32 unanimous pairs gave W = %g, p = %g", u.W, u.p));
    return std::to_string(cases) + " cases equal enumeration; 32 unanimous pairs W = 0, p = " + fmt("%.2g", u.p);
}

// ---- menu

std::vector<GestureEvent> every_gesture() {
    std::vector<GestureEvent> out;
    for (int n = 1; n <= 5; ++n) {
        out.push_back(GestureEvent::hand_count(Hand::Left, n));
        out.push_back(GestureEvent::hand_count(Hand::Right, n));
    }
    out.push_back(GestureEvent::system_toggle());
    out.push_back(GestureEvent::top_menu());
    out.push_back(GestureEvent::cancel());
    return out;
}

std::string menu_machine() {
    int tasks = 0;
    for (int road : builtin_road_ids()) {
        const auto sc = builtin_scenario(road);
        SystemState s;
        DeviceState console;
        for (const auto& task : sc.tasks) {
            const auto goal = goal_for_task(task, s);
            for (const auto& g : plan_gestures(s, goal)) s = apply_gesture(s, g).state;
            need(goal.satisfied(s), "road " + std::to_string(road) + " task " + std::to_string(task.index) +
                                        " not reached by gestures");
            const auto tgoal = tactile_goal_for_task(task, console);
            SystemState cs{MenuState{}, console, std::nullopt};
            for (const auto& a : plan_tactile(console, tgoal)) cs = apply_tactile(cs, a).state;
            console = cs.devices;
            need(tgoal.devices_satisfied(console), "road " + std::to_string(road) + " task " +
                                                       std::to_string(task.index) + " not reached on the console");
            ++tasks;
        }
    }

    const auto r1 = apply_gesture(SystemState{}, GestureEvent::hand_count(Hand::Right, 1));
    need(r1.state.menu.focus == MenuFocus::Radio, "Right-1 at Top does not enter Radio");
    need(std::find(r1.feedback.begin(), r1.feedback.end(), FeedbackEvent{FeedbackKind::Verbal, "radio"}) !=
             r1.feedback.end(),
         "Right-1 at Top gives no Verbal(radio)");
    const auto r2 = apply_gesture(r1.state, GestureEvent::hand_count(Hand::Right, 2));
    need(r2.state.devices.radio.volume == r1.state.devices.radio.volume + 1, "Right-2 in Radio does not raise volume");
    const auto r4 = apply_gesture(r2.state, GestureEvent::hand_count(Hand::Right, 4));
    need(r4.state.menu.focus == MenuFocus::Top, "Right-4 in Radio does not return to Top");

    // every focus and device combination reachable within three gestures, then every single step from each
    std::vector<SystemState> seen{SystemState{}}, frontier{SystemState{}};
    for (int d = 0; d < 3; ++d) {
        std::vector<SystemState> next;
        for (const auto& s : frontier) {
            for (const auto& g : every_gesture()) {
                auto t = apply_gesture(s, g).state;
                if (std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
                seen.push_back(t);
                next.push_back(t);
            }
        }
        frontier = std::move(next);
    }
    long steps = 0, absorbed = 0;
    for (const auto& s : seen) {
        for (const auto& g : every_gesture()) {
            if (g.kind == GestureKind::Cancel) continue;
            const auto t = apply_gesture(s, g).state;
            if (t.same_visible(s)) continue;
            need(t.undo_snapshot && *t.undo_snapshot == s.snapshot(), "no undo snapshot after " + describe(g));
            if (t.menu.focus == MenuFocus::InterfaceOff) {
                need(apply_gesture(t, GestureEvent::cancel()).state == t, "InterfaceOff does not absorb Cancel");
                const auto on = apply_gesture(t, GestureEvent::system_toggle()).state;
                need(on.devices == s.devices && on.menu.focus == MenuFocus::Top,
                     "SystemToggle back from InterfaceOff changes devices or misses Top");
                ++absorbed;
                continue;
            }
            const auto back = apply_gesture(t, GestureEvent::cancel()).state;
            need(back.same_visible(s), "Cancel after " + describe(g) + " does not restore the prior state");
            ++steps;
        }
    }
    return std::to_string(tasks) + " table tasks achieved; anchors hold; undo verified on " + std::to_string(steps) +
           " transitions from " + std::to_string(seen.size()) + " states; " + std::to_string(absorbed) +
           " SystemToggle steps into InterfaceOff, where Cancel is absorbed, toggle back to Top with devices intact";
}

// ---- recognizer

HandPose pose(Hand h, int n) {
    HandPose p;
    p.hand = h;
    p.spread_count = n;
    for (int i = 0; i < kFingers; ++i) p.poses[i] = i < n ? FingerPose::Spread : FingerPose::Closed;
    return p;
}

std::string recognizer() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> c(0, 5), len(1, 30), kind(0, 3);

    // one-shot and count invariance over random frame streams
    for (int iter = 0; iter < 300; ++iter) {
        std::vector<std::pair<int, int>> frames;
        for (int k = 0; k < 30; ++k) {
            const int kd = kind(rng);
            std::pair<int, int> f{0, 0};
            if (kd == 1) f = {c(rng), 0};
            if (kd == 2) f = {0, c(rng)};
            if (kd == 3) f = {c(rng), c(rng)};
            frames.insert(frames.end(), len(rng), f);
        }
        RecognizerState s;
        Recognizer a, b;
        bool armed = true;
        std::vector<std::string> ea, eb;
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const auto [l, r] = frames[i];
            const auto res = feed(s, pose(Hand::Left, l), pose(Hand::Right, r), {});
            s = res.state;
            if (l == 0 && r == 0) armed = true;
            if (res.event) {
                need(armed, "second event inside one hold episode");
                armed = false;
            }
            FingerOrder lo{0, 1, 2, 3, 4}, ro{0, 1, 2, 3, 4};
            std::shuffle(lo.begin(), lo.end(), rng);
            std::shuffle(ro.begin(), ro.end(), rng);
            SamplePair p1{{Hand::Left, bends_for_count(l), double(i)}, {Hand::Right, bends_for_count(r), double(i)}};
            SamplePair p2{{Hand::Left, bends_for_count(l, lo), double(i)},
                          {Hand::Right, bends_for_count(r, ro), double(i)}};
            if (auto e = a.push(p1)) ea.push_back(describe(*e));
            if (auto e = b.push(p2)) eb.push_back(describe(*e));
        }
        need(ea == eb, "events depend on which fingers realise a count");
    }

    // 1000 intended gestures, 300 ms hold and 150 ms release, sensor noise sd 3
    GloveConfig glove;
    BendNoise noise(3.0);
    const auto& alphabet = gesture_alphabet();
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> hold_ms(250, 450);
    Recognizer rec;
    int recognized = 0, spurious = 0, events = 0;
    double t = 0;
    for (int g = 0; g < 1000; ++g) {
        const auto want = alphabet[pick(rng)];
        const auto [l, r] = counts_for(want);
        const std::vector<ScriptStep> script{{l, r, double(hold_ms(rng))}, {0, 0, 150}};
        FingerOrder lo{0, 1, 2, 3, 4}, ro{0, 1, 2, 3, 4};
        std::shuffle(lo.begin(), lo.end(), rng);
        std::shuffle(ro.begin(), ro.end(), rng);
        auto frames = synth_stream(script, glove, t, lo, ro);
        t = frames.back().right.t_ms + glove.frame_period_ms();
        bool hit = false;
        for (auto& f : frames) {
            noise.apply(f.left, rng);
            noise.apply(f.right, rng);
            if (auto e = rec.push(f)) {
                ++events;
                if (!hit && e->same_gesture(want)) {
                    hit = true;
                } else {
                    ++spurious;
                }
            }
        }
        recognized += hit;
    }
    const double s = seconds_since(t0);
    const double rate = recognized / 10.0, fp = events ? 100.0 * spurious / events : 0.0;
    need(rate >= 99.0, fmt("recognized %.1f%% < 99%%", rate));
    need(fp < 0.5, fmt("spurious %.2f%% >= 0.5%%", fp));
    need(s < 10.0, fmt("took %.2f s, limit 10 s", s));
    return fmt("properties hold; 1000 noisy gestures: %.1f%% recognized, %.2f%% spurious, %.2f s", rate, fp, s);
}

// ---- end to end

int run_cli(const std::string& cli, const std::string& args, const fs::path& log) {
    const std::string cmd = "\"" + cli + "\" " + args + " > \"" + log.string() + "\" 2> \"" + log.string() + ".err\"";
    return std::system(cmd.c_str());
}

std::string run_args(const fs::path& out) {
    return "run --road 1 --road 2 --condition all --subjects 32 --seed 42 --out \"" + out.string() + "\"";
}

std::map<std::string, double> means(const nlohmann::json& metric) {
    std::map<std::string, double> m;
    for (const auto& s : metric["summary"]) m[s["condition"].get<std::string>()] = s["mean"].get<double>();
    return m;
}

std::string end_to_end(const std::string& cli, const fs::path& work) {
    const auto out = work / "a";
    const auto t0 = Clock::now();
    const int rc = run_cli(cli, run_args(out), work / "a.stdout");
    const double s = seconds_since(t0);
    need(rc == 0, "run exited with status " + std::to_string(rc));
    need(s < 60.0, fmt("run took %.1f s, limit 60 s", s));

    std::ifstream in(out / "report.json");
    need(bool(in), "no report.json");
    const auto rep = nlohmann::json::parse(in);
    std::map<std::string, nlohmann::json> by;
    for (const auto& m : rep["metrics"]) by[m["metric"].get<std::string>()] = m;
    for (const char* k : {"brake_rt", "task_time", "forward_aoi", "speed_rmse", "lateral_rmse"}) {
        need(by.count(k) && !by[k]["omnibus"].is_null(), std::string("no omnibus result for ") + k);
    }

    const auto rt = means(by["brake_rt"]);
    const double rt_ratio = rt.at("tactile") / rt.at("baseline");
    need(rt_ratio >= 1.14 && rt_ratio <= 1.24, fmt("tactile/baseline brake RT ratio %.3f outside [1.14, 1.24]", rt_ratio));

    const auto tt = means(by["task_time"]);
    const double tt_ratio = tt.at("gesture") / tt.at("tactile");
    need(tt_ratio >= 0.76 && tt_ratio <= 0.86, fmt("gesture/tactile task time ratio %.3f outside [0.76, 0.86]", tt_ratio));

    const auto fw = means(by["forward_aoi"]);
    const std::map<std::string, double> target{{"baseline", 86.06}, {"tactile", 79.72}, {"gesture", 86.89}};
    for (const auto& [cond, want] : target) {
        need(std::abs(fw.at(cond) - want) <= 2.0, fmt("forward AOI %.2f vs %.2f", fw.at(cond), want) + " for " + cond);
    }

    auto p = [&](const char* k) { return by[k]["omnibus"]["p"].get<double>(); };
    need(p("brake_rt") < 0.05, fmt("brake RT omnibus p = %.4f not significant", p("brake_rt")));
    need(p("task_time") < 0.05, fmt("task time omnibus p = %.4f not significant", p("task_time")));
    need(p("speed_rmse") > 0.05, fmt("speed RMSE omnibus p = %.4f significant", p("speed_rmse")));
    need(p("lateral_rmse") > 0.05, fmt("lateral RMSE omnibus p = %.4f significant", p("lateral_rmse")));

    std::ostringstream o;
    o << fmt("%.1f s; RT ratio %.3f; task ratio %.3f; ", s, rt_ratio, tt_ratio)
      << fmt("forward %.2f/%.2f/%.2f; ", fw.at("baseline"), fw.at("tactile"), fw.at("gesture"))
      << fmt("p RT %.2g, task %.2g, ", p("brake_rt"), p("task_time"))
      << fmt("speed %.3f, lateral %.3f", p("speed_rmse"), p("lateral_rmse"));
    return o.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string determinism(const std::string& cli, const fs::path& work) {
    const auto a = work / "a", b = work / "b";
    if (!fs::exists(a / "report.json")) need(run_cli(cli, run_args(a), work / "a.stdout") == 0, "first run failed");
    need(run_cli(cli, run_args(b), work / "b.stdout") == 0, "second run failed");
    need(slurp(work / "a.stdout") == slurp(work / "b.stdout"), "printed report differs");
    int files = 0;
    for (const auto& e : fs::directory_iterator(a / "runs")) {
        need(slurp(e.path()) == slurp(b / "runs" / e.path().filename()), e.path().filename().string() + " differs");
        ++files;
    }
    need(files == 192, "expected 192 run logs, found " + std::to_string(files));
    for (const char* f : {"manifest.json", "metrics.csv", "report.txt", "report.json"}) {
        need(slurp(a / f) == slurp(b / f), std::string(f) + " differs");
    }
    return std::to_string(files) + " logs and 4 report files byte identical";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: acceptance <fingerhud-cli> <datadir> <workdir>\n";
        return 2;
    }
    const std::string cli = argv[1], datadir = argv[2];
    const fs::path work = argv[3];
    fs::remove_all(work);
    fs::create_directories(work);

    criterion("metric oracles", metric_oracles);
    criterion("anova", [&] { return anova(datadir); });
    criterion("wilcoxon", wilcoxon);
    criterion("menu machine", menu_machine);
    criterion("recognizer", recognizer);
    criterion("end-to-end calibration", [&] { return end_to_end(cli, work); });
    criterion("determinism", [&] { return determinism(cli, work); });

    fs::remove_all(work);
    std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures << " failure(s)" << std::endl;
    return failures ? 1 : 0;
}
