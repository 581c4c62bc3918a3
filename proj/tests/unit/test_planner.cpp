#include <doctest.h>

#include <map>
#include <vector>

#include "fingerhud/error.hpp"
#include "fingerhud/planner.hpp"
#include "helpers.hpp"

using namespace fingerhud;

namespace {

SystemState replay(SystemState s, const std::vector<GestureEvent>& plan) {
    for (const auto& g : plan) s = apply_gesture(s, g).state;
    return s;
}

// plain BFS distance over the same alphabet, no parent tracking or pruning tricks
int oracle_distance(const SystemState& start, const TaskGoal& goal, int limit) {
    if (goal.satisfied(start)) return 0;
    std::vector<SystemState> layer{start}, seen{start};
    for (int d = 1; d <= limit; ++d) {
        std::vector<SystemState> next;
        for (const auto& s : layer) {
            for (const auto& g : gesture_alphabet()) {
                auto t = apply_gesture(s, g).state;
                if (goal.satisfied(t)) return d;
                if (std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
                seen.push_back(t);
                next.push_back(t);
            }
        }
        layer = std::move(next);
    }
    return -1;
}

}  // namespace

TEST_SUITE("planner") {
    TEST_CASE("radio on from fresh Top") {
        SystemState s;
        const auto plan = plan_gestures(s, TaskGoal::power(Device::Radio, true));
        REQUIRE(plan.size() == 1);
        CHECK(describe(plan[0]) == "Right-1");
    }

    TEST_CASE("volume plus two inside Radio") {
        SystemState s;
        s = apply_gesture(s, GestureEvent::hand_count(Hand::Right, 1)).state;
        const auto plan = plan_gestures(s, TaskGoal::volume(Device::Radio, s.devices.radio.volume + 2));
        REQUIRE(plan.size() == 2);
        CHECK(describe(plan[0]) == "Right-2");
        CHECK(describe(plan[1]) == "Right-2");
    }

    TEST_CASE("already satisfied gives an empty plan") {
        SystemState s;
        CHECK(plan_gestures(s, TaskGoal::power(Device::Radio, false)).empty());
    }

    TEST_CASE("unreachable goals name the goal") {
        SystemState s;
        CHECK_THROWS_WITH_AS(plan_gestures(s, TaskGoal::volume(Device::Radio, 31)),
                             doctest::Contains("Radio volume = 31"), UnreachableGoal);
        CHECK_THROWS_AS(plan_gestures(s, TaskGoal::fan(Device::AC, 0)), UnreachableGoal);
        CHECK_THROWS_AS(plan_gestures(s, TaskGoal::volume(Device::Radio, 29), default_layout(), 3), UnreachableGoal);
    }

    TEST_CASE("alphabet order: low counts, right before left, no right five") {
        const auto& a = gesture_alphabet();
        CHECK(describe(a[0]) == "Right-1");
        CHECK(describe(a[1]) == "Left-1");
        for (const auto& g : a) CHECK(describe(g) != "Right-5");
    }

    TEST_CASE("shortest against a BFS oracle on random goals") {
        testutil::Rng rng(4);
        for (int iter = 0; iter < 40; ++iter) {
            SystemState s;
            const int walk = testutil::uniform_int(rng, 0, 6);
            for (int i = 0; i < walk; ++i) {
                const auto& a = gesture_alphabet();
                s = apply_gesture(s, a[testutil::uniform_int(rng, 0, int(a.size()) - 1)]).state;
            }
            TaskGoal goal;
            switch (testutil::uniform_int(rng, 0, 4)) {
                case 0: goal = TaskGoal::power(kAllDevices[testutil::uniform_int(rng, 0, 3)], testutil::uniform_int(rng, 0, 1)); break;
                case 1: goal = TaskGoal::volume(Device::Mp3, testutil::uniform_int(rng, 8, 12)); break;
                case 2: goal = TaskGoal::fan(Device::Heater, testutil::uniform_int(rng, 1, 4)); break;
                case 3: goal = TaskGoal::outlet_is(Device::AC, static_cast<Outlet>(testutil::uniform_int(rng, 0, 3))); break;
                default: goal = TaskGoal::mode_is(Mp3Mode::Intro, true); break;
            }
            const auto plan = plan_gestures(s, goal);
            CHECK(replay(s, plan).devices == replay(s, plan).devices);
            REQUIRE(goal.satisfied(replay(s, plan)));
            REQUIRE(int(plan.size()) == oracle_distance(s, goal, 6));
        }
    }

    TEST_CASE("every built-in table task is achievable in sequence") {
        for (int road : builtin_road_ids()) {
            const auto sc = builtin_scenario(road);
            SystemState s;
            SystemState t;
            DeviceState console;
            for (const auto& task : sc.tasks) {
                CAPTURE(road);
                CAPTURE(task.index);
                const auto goal = goal_for_task(task, s);
                const auto plan = plan_gestures(s, goal);
                s = replay(s, plan);
                REQUIRE(goal.satisfied(s));

                const auto tgoal = tactile_goal_for_task(task, console);
                SystemState cs{MenuState{}, console, std::nullopt};
                for (const auto& a : plan_tactile(console, tgoal)) cs = apply_tactile(cs, a).state;
                console = cs.devices;
                REQUIRE(tgoal.devices_satisfied(console));
            }
            (void)t;
        }
    }

    TEST_CASE("turn on goal requires the device menu") {
        SystemState s;
        TaskSpec t{1, 100, RoadCondition::Normal, Device::AC, Feature::Turn, Control::On, 1, {}};
        const auto g = goal_for_task(t, s);
        CHECK(g.focus == MenuFocus::AC);
        device_ops::set_power(s.devices, Device::AC, true);
        CHECK_FALSE(g.satisfied(s));
        CHECK(plan_gestures(s, g).size() == 1);
    }

    TEST_CASE("relative goals resolve against the start state") {
        SystemState s;
        s.devices.mp3.volume = 7;
        TaskSpec t{1, 0, RoadCondition::Normal, Device::Mp3, Feature::Volume, Control::Down, 3, {}};
        const auto g = goal_for_task(t, s);
        CHECK(g.kind == TaskGoal::Kind::Volume);
        CHECK(g.value == 4);
        TaskSpec m{1, 0, RoadCondition::Normal, Device::Mp3, Feature::Mode, Control::Select, 1, Mp3Mode::Random};
        CHECK(goal_for_task(m, s).flag == true);
        s.devices.mp3.random = true;
        CHECK(goal_for_task(m, s).flag == false);
    }

    TEST_CASE("tactile plans") {
        DeviceState d;
        auto script = plan_tactile(d, TaskGoal::volume(Device::Radio, 12));
        CHECK(script.size() == 3);
        CHECK(std::holds_alternative<tactile::PowerToggle>(script[0]));
        d.radio.power = true;
        d.radio.station = 9;
        script = plan_tactile(d, TaskGoal::station(2));
        REQUIRE(script.size() == 1);
        CHECK(std::get<tactile::Preset>(script[0]).index == 2);
        script = plan_tactile(d, TaskGoal::station(10));
        REQUIRE(script.size() == 1);
        CHECK(std::get<tactile::ChannelStep>(script[0]).delta == 1);
        CHECK_THROWS_AS(plan_tactile(d, TaskGoal::fan(Device::AC, 9)), UnreachableGoal);
    }
}
