#include <doctest.h>

#include "fingerhud/error.hpp"
#include "fingerhud/scenario.hpp"

using namespace fingerhud;

TEST_SUITE("scenario") {
    TEST_CASE("roads one and two") {
        for (int id : {1, 2}) {
            const auto s = builtin_scenario(id);
            CHECK(s.road.length_m == 4900.0);
            CHECK(s.road.ref_speed_kmh == 80.0);
            CHECK(s.road.lane_count == 6);
            REQUIRE(s.tasks.size() == 16);
            for (std::size_t k = 0; k < s.tasks.size(); ++k) CHECK(s.tasks[k].location_m == 100.0 + 300.0 * k);
            std::vector<int> acc;
            for (const auto& t : s.tasks) {
                if (t.condition == RoadCondition::Accident) acc.push_back(t.index);
            }
            CHECK(acc == std::vector<int>{4, 7, 9, 12, 15});
            CHECK(s.hazards.size() == 5);
        }
        auto a = builtin_scenario(1), b = builtin_scenario(2);
        CHECK(a.tasks == b.tasks);
        CHECK(a.road.curvature != b.road.curvature);
    }

    TEST_CASE("road three rows") {
        const auto s = builtin_scenario(3);
        CHECK(s.road.length_m == 11550.0);
        CHECK(s.road.ref_speed_kmh == 70.0);
        REQUIRE(s.tasks.size() == 15);
        const auto& t1 = s.tasks[0];
        CHECK(t1.location_m == 900.0);
        CHECK(t1.condition == RoadCondition::Normal);
        CHECK(t1.device == Device::Radio);
        CHECK(t1.feature == Feature::Volume);
        CHECK(t1.control == Control::Up);
        CHECK(t1.levels == 2);
        const auto& t3 = s.tasks[2];
        CHECK(t3.location_m == 1900.0);
        CHECK(t3.condition == RoadCondition::SharpCurve);
        CHECK(t3.device == Device::AC);
        CHECK(t3.feature == Feature::Airflow);
        CHECK(t3.levels == 2);
        int normal = 0;
        for (const auto& t : s.tasks) normal += !t.hazardous();
        CHECK(normal == 8);
        CHECK(s.hazards.size() == 7);
        for (const auto& h : s.hazards) {
            const auto it = std::find_if(s.tasks.begin(), s.tasks.end(), [&](auto& t) { return t.index == h.task_index; });
            REQUIRE(it != s.tasks.end());
            CHECK(it->location_m == h.location_m);
        }
    }

    TEST_CASE("road three lane schedule") {
        const auto s = builtin_scenario(3);
        CHECK(s.lane_at(100) == 2);
        CHECK(s.lane_at(1000) == 2);
        CHECK(s.lane_at(3600) == 2);
        CHECK(s.lane_at(4000) == 1);
        CHECK(s.lane_at(7349.9) == 1);
        CHECK(s.lane_at(7350) == 2);
    }

    TEST_CASE("unknown road") { CHECK_THROWS_WITH_AS(builtin_scenario(4), doctest::Contains("4"), ConfigError); }

    TEST_CASE("document round trip") {
        for (int id : builtin_road_ids()) {
            const auto s = builtin_scenario(id);
            CHECK(load_scenario(scenario_to_json(s)) == s);
            CHECK(load_scenario(nlohmann::json::parse(scenario_to_json(s).dump())) == s);
        }
    }

    TEST_CASE("range, levels, ordering and enum errors") {
        auto doc = scenario_to_json(builtin_scenario(1));
        auto bad = doc;
        bad["tasks"][15]["location_m"] = 5000;
        CHECK_THROWS_WITH_AS(load_scenario(bad), doctest::Contains("5000"), ConfigError);
        bad = doc;
        bad["tasks"][1]["levels"] = 0;
        CHECK_THROWS_WITH_AS(load_scenario(bad), doctest::Contains("levels"), ConfigError);
        bad = doc;
        bad["tasks"][0]["levels"] = 2;
        CHECK_THROWS_AS(load_scenario(bad), ConfigError);
        bad = doc;
        std::swap(bad["tasks"][2], bad["tasks"][3]);
        CHECK_THROWS_WITH_AS(load_scenario(bad), doctest::Contains("sorted"), ConfigError);
        bad = doc;
        bad["tasks"][5]["device"] = "Toaster";
        CHECK_THROWS_WITH_AS(load_scenario(bad), doctest::Contains("row 5"), ConfigError);
        bad = doc;
        bad["road"]["ref_speed_kmh"] = 0;
        CHECK_THROWS_AS(load_scenario(bad), ConfigError);
        bad = doc;
        bad["road"].erase("length_m");
        CHECK_THROWS_AS(load_scenario(bad), ConfigError);
    }

    TEST_CASE("events_between") {
        const auto s = builtin_scenario(1);
        const auto a = events_between(s, 0, 150);
        REQUIRE(a.size() == 1);
        CHECK(a[0].index == 1);
        CHECK(events_between(s, 400, 400).empty());
        CHECK(events_between(s, 0, s.road.length_m).size() == s.tasks.size());
        CHECK(events_between(s, 100, 400).size() == 1);
        CHECK(events_between(s, 500, 100).empty());
    }

    TEST_CASE("csv export") {
        const auto csv = tasks_to_csv(builtin_scenario(3));
        CHECK(csv.rfind("index,location_m,condition", 0) == 0);
        CHECK(csv.find("12,7350,Normal,Radio,Channel,Select,1,CH2") != std::string::npos);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 16);
    }

    TEST_CASE("describe") {
        CHECK(builtin_scenario(1).tasks[1].describe() == "Radio Volume Up x2");
    }
}
