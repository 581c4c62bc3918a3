#include <doctest.h>

#include <cmath>
#include <set>

#include "fingerhud/driver_sim.hpp"
#include "fingerhud/error.hpp"
#include "fingerhud/metrics.hpp"
#include "fingerhud/runlog.hpp"

using namespace fingerhud;

namespace {

DriverParams quiet() {
    auto p = default_params();
    for (auto c : kAllConditions) {
        p.of(c).speed_noise.sigma = 0;
        p.of(c).lateral_noise.sigma = 0;
    }
    return p;
}

Scenario short_road(std::vector<TaskSpec> tasks = {}) {
    RoadSpec r;
    r.id = 9;
    r.length_m = 1200;
    r.ref_speed_kmh = 80;
    return make_scenario(r, std::move(tasks));
}

double mean_rt(const RunLog& log) {
    double s = 0;
    int n = 0;
    for (const auto& h : log.hazards) {
        if (h.brake_onset_t) {
            s += *h.brake_onset_t - h.onset_t;
            ++n;
        }
    }
    return n ? s / n : 0.0;
}

}  // namespace

TEST_SUITE("driver_sim") {
    TEST_CASE("zero noise and no tasks keeps speed and lane exactly") {
        const auto log = simulate_run(short_road(), Condition::Tactile, quiet(), 1);
        REQUIRE(log.drive.size() > 100);
        for (const auto& d : log.drive) {
            REQUIRE(d.speed_kmh == 80.0);
            REQUIRE(d.lateral_offset_m == 0.0);
        }
        const auto w = whole_run(log.drive);
        CHECK(speed_rmse(log.drive, 80, w) == 0.0);
        CHECK(lateral_rmse(log.drive, w) == 0.0);
        CHECK(log.tasks.empty());
        CHECK(log.hazards.empty());
    }

    TEST_CASE("same seed gives identical logs, different seed differs") {
        const auto sc = builtin_scenario(1);
        for (auto c : kAllConditions) {
            const auto a = simulate_run(sc, c, default_params(), 77);
            const auto b = simulate_run(sc, c, default_params(), 77);
            CHECK(a == b);
            CHECK(runlog_to_string(a) == runlog_to_string(b));
            CHECK(runlog_to_string(simulate_run(sc, c, default_params(), 78)) != runlog_to_string(a));
        }
    }

    TEST_CASE("forced reaction time is exact") {
        SimOverrides ov;
        ov.brake_rt_s = 0.8;
        const auto log = simulate_run(builtin_scenario(1), Condition::Gesture, default_params(), 3, ov);
        REQUIRE(log.hazards.size() == 5);
        for (const auto& h : log.hazards) {
            REQUIRE(h.brake_onset_t);
            CHECK(std::abs((*h.brake_onset_t - h.onset_t) - 0.8) < 1e-12);
        }
        // survives the text format
        std::istringstream in(runlog_to_string(log));
        const auto back = parse_runlog(in);
        for (const auto& h : back.hazards) CHECK(std::abs((*h.brake_onset_t - h.onset_t) - 0.8) < 1e-12);
    }

    TEST_CASE("position integrates speed") {
        for (int road : {1, 3}) {
            const auto log = simulate_run(builtin_scenario(road), Condition::Tactile, default_params(), 11);
            const double dt = log.header.dt_s;
            for (std::size_t i = 1; i < log.drive.size(); ++i) {
                const double dp = log.drive[i].position_m - log.drive[i - 1].position_m;
                REQUIRE(std::abs(dp - log.drive[i - 1].speed_kmh / 3.6 * dt) < 1e-9);
            }
        }
    }

    TEST_CASE("rows are time ordered at fixed dt and aligned") {
        const auto log = simulate_run(builtin_scenario(2), Condition::Gesture, default_params(), 5);
        REQUIRE(log.drive.size() == log.gaze.size());
        REQUIRE(log.drive.size() == log.head.size());
        for (std::size_t i = 0; i < log.drive.size(); ++i) {
            REQUIRE(std::abs(log.drive[i].t_s - i * log.header.dt_s) <= 1e-6);
            REQUIRE(log.gaze[i].t_s == log.drive[i].t_s);
            REQUIRE(log.head[i].t_s == log.drive[i].t_s);
            REQUIRE(log.drive[i].menu_focus.has_value());
            REQUIRE(classify_gaze(default_params().aoi, log.gaze[i].x_px, log.gaze[i].y_px) == log.gaze[i].aoi);
        }
    }

    TEST_CASE("one record per task and per hazard") {
        for (int road : builtin_road_ids()) {
            const auto sc = builtin_scenario(road);
            for (auto c : {Condition::Tactile, Condition::Gesture}) {
                for (std::uint64_t seed : {1u, 2u, 3u}) {
                    const auto log = simulate_run(sc, c, default_params(), seed);
                    CAPTURE(road);
                    CAPTURE(seed);
                    REQUIRE(log.tasks.size() == sc.tasks.size());
                    std::set<int> ids;
                    for (const auto& t : log.tasks) {
                        ids.insert(t.task_id);
                        REQUIRE(t.done_t >= t.command_end_t);
                        REQUIRE(t.command_end_t == doctest::Approx(t.trigger_t + 2.0));
                        REQUIRE(t.goal_met);
                    }
                    REQUIRE(ids.size() == sc.tasks.size());
                    REQUIRE(log.hazards.size() == sc.hazards.size());
                    for (const auto& h : log.hazards) {
                        REQUIRE(h.brake_onset_t);
                        REQUIRE(*h.brake_onset_t >= h.onset_t + 0.2);
                        REQUIRE(h.recovered_t);
                    }
                    REQUIRE_FALSE(log.header.truncated);
                }
            }
        }
    }

    TEST_CASE("baseline drives without tasks") {
        const auto sc = builtin_scenario(1);
        const auto log = simulate_run(sc, Condition::Baseline, default_params(), 9);
        CHECK(log.tasks.empty());
        CHECK(log.hazards.size() == 5);
        for (const auto& d : log.drive) REQUIRE(d.active_task == -1);
        for (const auto& g : log.gaze) REQUIRE(g.aoi != Aoi::Console);
    }

    TEST_CASE("gesture gaze never lands on the console") {
        const auto log = simulate_run(builtin_scenario(1), Condition::Gesture, default_params(), 21);
        for (const auto& g : log.gaze) REQUIRE(g.aoi != Aoi::Console);
        bool left_top = false;
        for (const auto& d : log.drive) {
            REQUIRE(d.menu_focus);
            left_top = left_top || *d.menu_focus != MenuFocus::Top;
        }
        CHECK(left_top);
    }

    TEST_CASE("tactile glances at the console during tasks") {
        const auto log = simulate_run(builtin_scenario(1), Condition::Tactile, default_params(), 21);
        long console = 0;
        for (std::size_t i = 0; i < log.gaze.size(); ++i) {
            if (log.gaze[i].aoi == Aoi::Console) {
                ++console;
                REQUIRE(log.drive[i].active_task != -1);
            }
        }
        CHECK(console > 0);
    }

    TEST_CASE("braking drops speed") {
        SimOverrides ov;
        ov.brake_rt_s = 1.0;
        const auto log = simulate_run(builtin_scenario(1), Condition::Baseline, quiet(), 4, ov);
        const auto& h = log.hazards.at(0);
        double lowest = 1e9;
        for (const auto& d : log.drive) {
            if (d.t_s >= h.onset_t && d.t_s <= *h.recovered_t) lowest = std::min(lowest, d.speed_kmh);
            if (d.t_s < *h.brake_onset_t - 1e-6 && d.t_s >= h.onset_t) REQUIRE_FALSE(d.brake);
        }
        CHECK(lowest == doctest::Approx(60.0).epsilon(0.01));
    }

    TEST_CASE("larger tactile reaction mean gives larger measured reaction") {
        auto lo = default_params();
        auto hi = default_params();
        hi.tactile.brake_rt_mean_s *= 1.3;
        const auto sc = builtin_scenario(1);
        double a = 0, b = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            a += mean_rt(simulate_run(sc, Condition::Tactile, lo, seed));
            b += mean_rt(simulate_run(sc, Condition::Tactile, hi, seed));
        }
        CHECK(b > a);
        CHECK(b / a == doctest::Approx(1.3).epsilon(0.1));
    }

    TEST_CASE("a road too short to finish is truncated and flagged") {
        auto p = default_params();
        p.max_overrun_s = 0.5;
        TaskSpec t{1, 1190, RoadCondition::Normal, Device::Radio, Feature::Volume, Control::Up, 5, {}};
        const auto log = simulate_run(short_road({t}), Condition::Tactile, p, 2);
        CHECK(log.header.truncated);
        REQUIRE(log.tasks.size() == 1);
        CHECK_FALSE(log.tasks[0].goal_met);
    }

    TEST_CASE("params validation and json") {
        auto p = default_params();
        CHECK(p.tactile.brake_rt_mean_s / p.baseline.brake_rt_mean_s == doctest::Approx(1.19));
        CHECK(p.baseline.brake_rt_mean_s == 1.0);
        CHECK(p.gesture.head_excursion.yaw_deg == 2.6);
        CHECK(params_from_json(params_to_json(p)).tactile.reach_time_s == p.tactile.reach_time_s);
        CHECK(param_hash(params_from_json(params_to_json(p))) == param_hash(p));
        p.tactile.speed_noise.task_multiplier = 0.5;
        CHECK_THROWS(p.validate());
        p = default_params();
        p.dt_s = 0;
        CHECK_THROWS(p.validate());
    }

    TEST_CASE("classify_gaze") {
        AoiGeometry g;
        CHECK(classify_gaze(g, 640, 300) == Aoi::Forward);
        CHECK(classify_gaze(g, 640, 450) == Aoi::Forward);
        CHECK(classify_gaze(g, 1000, 650) == Aoi::Console);
        CHECK(classify_gaze(g, 100, 100) == Aoi::Other);
    }
}
