// Built-in task tables for the three experimental roads.
//
// Levels: the first/second-road table prints its "Levels" column out of line
// with the rows. The reading used here attaches each printed value to the
// nearest Volume/Airflow Up/Down row and leaves every other task at 1:
//   row 1 "2"  -> task 2 (Radio volume up)
//   row 7 "1"  -> task 6 (Heater airflow down)
//   row 13 "2" -> task 12 (MP3 volume up)
//   row 16 "2" -> task 16 (A/C airflow up)
// The values printed beside Turn/Select rows (4, 10) have no Up/Down
// neighbour and are dropped. Edit this file to change the reading.

#include "fingerhud/error.hpp"
#include "fingerhud/scenario.hpp"

namespace fingerhud {

namespace {

using RC = RoadCondition;
using F = Feature;
using C = Control;
using D = Device;

std::vector<TaskSpec> first_and_second_road_tasks() {
    return {
        {1, 100, RC::Normal, D::Radio, F::Turn, C::On, 1, {}},
        {2, 400, RC::Normal, D::Radio, F::Volume, C::Up, 2, {}},
        {3, 700, RC::Normal, D::AC, F::Turn, C::On, 1, {}},
        {4, 1000, RC::Accident, D::AC, F::Outlet, C::Select, 1, Outlet::Top},
        {5, 1300, RC::Normal, D::Heater, F::Turn, C::On, 1, {}},
        {6, 1600, RC::Normal, D::Heater, F::Airflow, C::Down, 1, {}},
        {7, 1900, RC::Accident, D::Mp3, F::Turn, C::On, 1, {}},
        {8, 2200, RC::Normal, D::Mp3, F::Mode, C::Select, 1, Mp3Mode::Mute},
        {9, 2500, RC::Accident, D::Heater, F::Turn, C::On, 1, {}},
        {10, 2800, RC::Normal, D::Heater, F::Outlet, C::Select, 1, Outlet::Bottom},
        {11, 3100, RC::Normal, D::Mp3, F::Turn, C::On, 1, {}},
        {12, 3400, RC::Accident, D::Mp3, F::Volume, C::Up, 2, {}},
        {13, 3700, RC::Normal, D::Radio, F::Turn, C::On, 1, {}},
        {14, 4000, RC::Normal, D::Radio, F::Channel, C::Select, 1, PresetChannel{1}},
        {15, 4300, RC::Accident, D::AC, F::Turn, C::On, 1, {}},
        {16, 4600, RC::Normal, D::AC, F::Airflow, C::Up, 2, {}},
    };
}

std::vector<TaskSpec> third_road_tasks() {
    return {
        {1, 900, RC::Normal, D::Radio, F::Volume, C::Up, 2, {}},
        {2, 1270, RC::Normal, D::Mp3, F::Volume, C::Down, 3, {}},
        {3, 1900, RC::SharpCurve, D::AC, F::Airflow, C::Up, 2, {}},
        {4, 2900, RC::SharpCurve, D::Heater, F::Airflow, C::Down, 1, {}},
        {5, 3480, RC::Normal, D::Radio, F::Channel, C::Select, 1, PresetChannel{1}},
        {6, 3850, RC::Normal, D::Mp3, F::Mode, C::Select, 1, Mp3Mode::Mute},
        {7, 4230, RC::SharpCurve, D::AC, F::Outlet, C::Select, 1, Outlet::Top},
        {8, 4390, RC::Normal, D::Radio, F::Volume, C::Down, 3, {}},
        {9, 5310, RC::CutIn, D::Mp3, F::Volume, C::Up, 2, {}},
        {10, 5970, RC::Tunnel, D::Heater, F::Airflow, C::Up, 3, {}},
        {11, 6700, RC::SharpCurve, D::AC, F::Airflow, C::Down, 2, {}},
        {12, 7350, RC::Normal, D::Radio, F::Channel, C::Select, 1, PresetChannel{2}},
        {13, 9120, RC::Normal, D::Mp3, F::Mode, C::Select, 1, Mp3Mode::Random},
        {14, 10530, RC::Normal, D::Mp3, F::Volume, C::Up, 5, {}},
        {15, 11110, RC::SharpCurve, D::Heater, F::Outlet, C::Select, 1, Outlet::Bottom},
    };
}

}  // namespace

std::vector<int> builtin_road_ids() { return {1, 2, 3}; }

Scenario builtin_scenario(int road_id) {
    switch (road_id) {
        case 1:
        case 2: {
            RoadSpec road;
            road.id = road_id;
            road.name = road_id == 1 ? "easy" : "difficult";
            road.length_m = 4900.0;
            road.ref_speed_kmh = 80.0;
            road.lane_schedule = {{0.0, 4900.0, 2}};
            road.curvature = road_id == 1 ? "gentle" : "curvy";
            return make_scenario(std::move(road), first_and_second_road_tasks());
        }
        case 3: {
            RoadSpec road;
            road.id = 3;
            road.name = "urban-highway";
            road.length_m = 11550.0;
            road.ref_speed_kmh = 70.0;
            // The 7300 m figure overlaps the previous segment; 7350 m is used as the boundary.
            road.lane_schedule = {{300.0, 3480.0, 2}, {3850.0, 7350.0, 1}, {7350.0, 11550.0, 2}};
            road.curvature = "urban";
            return make_scenario(std::move(road), third_road_tasks());
        }
        default: throw ConfigError("unknown road id " + std::to_string(road_id) + " (expected 1, 2 or 3)");
    }
}

}  // namespace fingerhud
