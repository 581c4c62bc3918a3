#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fingerhud/devices.hpp"

namespace fingerhud {

enum class RoadCondition { Normal, Accident, SharpCurve, CutIn, Tunnel, RoadWork };
enum class Feature { Turn, Volume, Airflow, Channel, Mode, Outlet };
enum class Control { On, Off, Up, Down, Select };

std::string_view to_string(RoadCondition c);
std::string_view to_string(Feature f);
std::string_view to_string(Control c);
RoadCondition road_condition_from_string(std::string_view text);
Feature feature_from_string(std::string_view text);
Control control_from_string(std::string_view text);

struct PresetChannel {
    int index = 1;  // 1..3
    bool operator==(const PresetChannel&) const = default;
};

// What a Select task selects: an outlet, an MP3 mode or a radio preset.
using TaskOption = std::variant<std::monostate, Outlet, Mp3Mode, PresetChannel>;
std::string option_to_string(const TaskOption& option);
TaskOption option_from_string(Feature feature, std::string_view text);

struct TaskSpec {
    int index = 0;
    double location_m = 0.0;
    RoadCondition condition = RoadCondition::Normal;
    Device device = Device::Radio;
    Feature feature = Feature::Turn;
    Control control = Control::On;
    int levels = 1;
    TaskOption option;

    bool operator==(const TaskSpec&) const = default;
    bool hazardous() const { return condition != RoadCondition::Normal; }
    std::string describe() const;
};

struct LaneSegment {
    double from_m = 0.0;
    double to_m = 0.0;
    int lane = 2;

    bool operator==(const LaneSegment&) const = default;
};

struct RoadSpec {
    int id = 0;
    std::string name;
    double length_m = 0.0;
    int lane_count = 6;
    double lane_width_m = 3.5;
    double ref_speed_kmh = 80.0;
    std::vector<LaneSegment> lane_schedule;
    // Informational: "gentle", "curvy", "urban". Only the driver model reads it.
    std::string curvature = "gentle";

    bool operator==(const RoadSpec&) const = default;
};

struct Hazard {
    int task_index = 0;
    double location_m = 0.0;
    RoadCondition kind = RoadCondition::Accident;

    bool operator==(const Hazard&) const = default;
};

struct Scenario {
    RoadSpec road;
    std::vector<TaskSpec> tasks;
    std::vector<Hazard> hazards;
    double hazard_sight_distance_m = 100.0;

    bool operator==(const Scenario&) const = default;

    // Lane the schedule asks for at a position; keeps the last scheduled lane
    // across gaps and defaults to lane 2 before the first segment.
    int lane_at(double position_m) const;
};

// Validates everything and derives hazards from the non-Normal tasks.
Scenario make_scenario(RoadSpec road, std::vector<TaskSpec> tasks, double hazard_sight_distance_m = 100.0);

Scenario builtin_scenario(int road_id);
std::vector<int> builtin_road_ids();

Scenario load_scenario(const nlohmann::json& document);
nlohmann::json scenario_to_json(const Scenario& scenario);
std::string tasks_to_csv(const Scenario& scenario);

// Tasks with s0 < location <= s1, in order.
std::vector<TaskSpec> events_between(const Scenario& scenario, double s0_m, double s1_m);

}  // namespace fingerhud
