#include "fingerhud/scenario.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "fingerhud/error.hpp"

namespace fingerhud {

namespace {

template <class E, std::size_t N>
std::string_view name_of(E value, const std::array<std::pair<E, const char*>, N>& table) {
    for (const auto& [v, name] : table) {
        if (v == value) return name;
    }
    return "?";
}

template <class E, std::size_t N>
E parse_enum(std::string_view text, const std::array<std::pair<E, const char*>, N>& table, const char* what) {
    for (const auto& [v, name] : table) {
        if (text == name) return v;
    }
    throw ConfigError(std::string("unknown ") + what + " '" + std::string(text) + "'");
}

constexpr std::array kConditions{
    std::pair{RoadCondition::Normal, "Normal"},         std::pair{RoadCondition::Accident, "Accident"},
    std::pair{RoadCondition::SharpCurve, "SharpCurve"}, std::pair{RoadCondition::CutIn, "CutIn"},
    std::pair{RoadCondition::Tunnel, "Tunnel"},         std::pair{RoadCondition::RoadWork, "RoadWork"},
};
constexpr std::array kFeatures{
    std::pair{Feature::Turn, "Turn"},       std::pair{Feature::Volume, "Volume"},
    std::pair{Feature::Airflow, "Airflow"}, std::pair{Feature::Channel, "Channel"},
    std::pair{Feature::Mode, "Mode"},       std::pair{Feature::Outlet, "Outlet"},
};
constexpr std::array kControls{
    std::pair{Control::On, "On"}, std::pair{Control::Off, "Off"},       std::pair{Control::Up, "Up"},
    std::pair{Control::Down, "Down"}, std::pair{Control::Select, "Select"},
};

bool is_step(Control c) { return c == Control::Up || c == Control::Down; }

void check_task(const TaskSpec& t) {
    const bool audio = t.device == Device::Radio || t.device == Device::Mp3;
    const bool climate = !audio;
    switch (t.feature) {
        case Feature::Turn:
            if (t.control != Control::On && t.control != Control::Off) throw ConfigError("Turn needs On or Off");
            break;
        case Feature::Volume:
            if (!audio) throw ConfigError("Volume applies to Radio or MP3 only");
            if (!is_step(t.control)) throw ConfigError("Volume needs Up or Down");
            break;
        case Feature::Airflow:
            if (!climate) throw ConfigError("Airflow applies to AC or Heater only");
            if (!is_step(t.control)) throw ConfigError("Airflow needs Up or Down");
            break;
        case Feature::Channel:
            if (t.device != Device::Radio) throw ConfigError("Channel applies to Radio only");
            if (t.control != Control::Select) throw ConfigError("Channel needs Select");
            if (!std::holds_alternative<PresetChannel>(t.option)) throw ConfigError("Channel needs a CH1..CH3 option");
            if (auto i = std::get<PresetChannel>(t.option).index; i < 1 || i > 3) {
                throw ConfigError("preset channel must be CH1..CH3");
            }
            break;
        case Feature::Mode:
            if (t.device != Device::Mp3) throw ConfigError("Mode applies to MP3 only");
            if (t.control != Control::Select) throw ConfigError("Mode needs Select");
            if (!std::holds_alternative<Mp3Mode>(t.option)) throw ConfigError("Mode needs a Random/Mute/Intro option");
            break;
        case Feature::Outlet:
            if (!climate) throw ConfigError("Outlet applies to AC or Heater only");
            if (t.control != Control::Select) throw ConfigError("Outlet needs Select");
            if (!std::holds_alternative<Outlet>(t.option)) throw ConfigError("Outlet needs an outlet option");
            break;
    }
    if (t.levels < 1) throw ConfigError("levels must be >= 1 (got " + std::to_string(t.levels) + ")");
    if (t.levels > 1 && !is_step(t.control)) throw ConfigError("levels > 1 only allowed for Up/Down tasks");
}

std::string row_label(std::size_t row, const TaskSpec& t) {
    return "task row " + std::to_string(row) + " (index " + std::to_string(t.index) + ")";
}

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::string_view to_string(RoadCondition c) { return name_of(c, kConditions); }
std::string_view to_string(Feature f) { return name_of(f, kFeatures); }
std::string_view to_string(Control c) { return name_of(c, kControls); }
RoadCondition road_condition_from_string(std::string_view t) { return parse_enum(t, kConditions, "road condition"); }
Feature feature_from_string(std::string_view t) { return parse_enum(t, kFeatures, "feature"); }
Control control_from_string(std::string_view t) { return parse_enum(t, kControls, "control"); }

std::string option_to_string(const TaskOption& option) {
    return std::visit(
        [](const auto& o) -> std::string {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, PresetChannel>) {
                return "CH" + std::to_string(o.index);
            } else {
                return std::string(to_string(o));
            }
        },
        option);
}

TaskOption option_from_string(Feature feature, std::string_view text) {
    if (text.empty()) return std::monostate{};
    switch (feature) {
        case Feature::Outlet: return outlet_from_string(text);
        case Feature::Mode: return mp3_mode_from_string(text);
        case Feature::Channel:
            if (text.size() == 3 && (text.substr(0, 2) == "CH" || text.substr(0, 2) == "ch") && text[2] >= '1' &&
                text[2] <= '9') {
                return PresetChannel{text[2] - '0'};
            }
            throw ConfigError("unknown channel option '" + std::string(text) + "'");
        default: throw ConfigError("feature " + std::string(to_string(feature)) + " takes no option");
    }
}

std::string TaskSpec::describe() const {
    std::string s = std::string(to_string(device)) + " " + std::string(to_string(feature));
    if (auto o = option_to_string(option); !o.empty()) s += " " + o;
    s += " " + std::string(to_string(control));
    if (levels > 1) s += " x" + std::to_string(levels);
    return s;
}

int Scenario::lane_at(double position_m) const {
    int lane = 2;
    for (const auto& seg : road.lane_schedule) {
        if (position_m >= seg.from_m) lane = seg.lane;
    }
    return lane;
}

Scenario make_scenario(RoadSpec road, std::vector<TaskSpec> tasks, double hazard_sight_distance_m) {
    if (!(road.length_m > 0.0)) throw ConfigError("road length must be positive");
    if (!(road.ref_speed_kmh > 0.0)) throw ConfigError("reference speed must be positive");
    if (road.lane_count < 2 || road.lane_count % 2 != 0) throw ConfigError("lane count must be even and >= 2");
    if (!(road.lane_width_m > 0.0)) throw ConfigError("lane width must be positive");
    if (!(hazard_sight_distance_m >= 0.0)) throw ConfigError("hazard sight distance must be >= 0");
    for (std::size_t i = 0; i < road.lane_schedule.size(); ++i) {
        const auto& seg = road.lane_schedule[i];
        const std::string where = "lane segment " + std::to_string(i);
        if (seg.from_m < 0.0 || seg.to_m > road.length_m || !(seg.from_m < seg.to_m)) {
            throw ConfigError(where + ": must satisfy 0 <= from < to <= road length");
        }
        if (seg.lane < 1 || seg.lane > road.lane_count / 2) throw ConfigError(where + ": lane index out of range");
        if (i > 0 && seg.from_m < road.lane_schedule[i - 1].to_m) throw ConfigError(where + ": overlaps previous segment");
    }

    Scenario s;
    s.hazard_sight_distance_m = hazard_sight_distance_m;
    for (std::size_t row = 0; row < tasks.size(); ++row) {
        const auto& t = tasks[row];
        try {
            check_task(t);
        } catch (const ConfigError& ex) {
            throw ConfigError(row_label(row, t) + ": " + ex.what());
        }
        if (t.location_m < 0.0 || t.location_m >= road.length_m) {
            throw ConfigError(row_label(row, t) + ": location " + fmt_num(t.location_m) + " m outside road [0, " +
                              fmt_num(road.length_m) + ")");
        }
        if (row > 0 && t.location_m < tasks[row - 1].location_m) {
            throw ConfigError(row_label(row, t) + ": tasks must be sorted by location");
        }
        for (std::size_t j = 0; j < row; ++j) {
            if (tasks[j].index == t.index) throw ConfigError(row_label(row, t) + ": duplicate task index");
        }
        if (t.hazardous()) s.hazards.push_back({t.index, t.location_m, t.condition});
    }
    s.road = std::move(road);
    s.tasks = std::move(tasks);
    return s;
}

Scenario load_scenario(const nlohmann::json& doc) {
    try {
        const auto& r = doc.at("road");
        RoadSpec road;
        road.id = r.at("id").get<int>();
        road.name = r.value("name", std::string{});
        road.length_m = r.at("length_m").get<double>();
        road.lane_count = r.value("lane_count", 6);
        road.lane_width_m = r.value("lane_width_m", 3.5);
        road.ref_speed_kmh = r.at("ref_speed_kmh").get<double>();
        road.curvature = r.value("curvature", std::string("gentle"));
        for (const auto& seg : r.value("lane_schedule", nlohmann::json::array())) {
            road.lane_schedule.push_back(
                {seg.at("from_m").get<double>(), seg.at("to_m").get<double>(), seg.at("lane").get<int>()});
        }
        std::vector<TaskSpec> tasks;
        std::size_t row = 0;
        for (const auto& t : doc.at("tasks")) {
            TaskSpec spec;
            try {
                spec.index = t.at("index").get<int>();
                spec.location_m = t.at("location_m").get<double>();
                spec.condition = road_condition_from_string(t.at("condition").get<std::string>());
                spec.device = device_from_string(t.at("device").get<std::string>());
                spec.feature = feature_from_string(t.at("feature").get<std::string>());
                spec.control = control_from_string(t.at("control").get<std::string>());
                spec.levels = t.value("levels", 1);
                spec.option = option_from_string(spec.feature, t.value("option", std::string{}));
            } catch (const std::exception& ex) {
                throw ConfigError("task row " + std::to_string(row) + ": " + ex.what());
            }
            tasks.push_back(spec);
            ++row;
        }
        return make_scenario(std::move(road), std::move(tasks), doc.value("hazard_sight_distance_m", 100.0));
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("scenario document: ") + ex.what());
    }
}

nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json lanes = nlohmann::json::array();
    for (const auto& seg : s.road.lane_schedule) {
        lanes.push_back({{"from_m", seg.from_m}, {"to_m", seg.to_m}, {"lane", seg.lane}});
    }
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& t : s.tasks) {
        nlohmann::json row{{"index", t.index},
                           {"location_m", t.location_m},
                           {"condition", to_string(t.condition)},
                           {"device", to_string(t.device)},
                           {"feature", to_string(t.feature)},
                           {"control", to_string(t.control)},
                           {"levels", t.levels}};
        if (auto o = option_to_string(t.option); !o.empty()) row["option"] = o;
        tasks.push_back(std::move(row));
    }
    return {{"schema", "fingerhud-scenario"},
            {"version", 1},
            {"road",
             {{"id", s.road.id},
              {"name", s.road.name},
              {"length_m", s.road.length_m},
              {"lane_count", s.road.lane_count},
              {"lane_width_m", s.road.lane_width_m},
              {"ref_speed_kmh", s.road.ref_speed_kmh},
              {"curvature", s.road.curvature},
              {"lane_schedule", lanes}}},
            {"hazard_sight_distance_m", s.hazard_sight_distance_m},
            {"tasks", tasks}};
}

std::string tasks_to_csv(const Scenario& s) {
    std::ostringstream out;
    out << "index,location_m,condition,device,feature,control,levels,option\n";
    for (const auto& t : s.tasks) {
        out << t.index << ',' << fmt_num(t.location_m) << ',' << to_string(t.condition) << ',' << to_string(t.device)
            << ',' << to_string(t.feature) << ',' << to_string(t.control) << ',' << t.levels << ','
            << option_to_string(t.option) << '\n';
    }
    return out.str();
}

std::vector<TaskSpec> events_between(const Scenario& s, double s0_m, double s1_m) {
    std::vector<TaskSpec> out;
    if (s1_m < s0_m) return out;
    for (const auto& t : s.tasks) {
        if (t.location_m > s0_m && t.location_m <= s1_m) out.push_back(t);
    }
    return out;
}

}  // namespace fingerhud
