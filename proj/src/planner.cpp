#include "fingerhud/planner.hpp"

#include <deque>
#include <set>

#include "fingerhud/error.hpp"

namespace fingerhud {

TaskGoal TaskGoal::in_menu(MenuFocus focus) {
    TaskGoal g;
    g.kind = Kind::Focus;
    g.focus = focus;
    return g;
}

TaskGoal TaskGoal::power(Device device, bool on, std::optional<MenuFocus> focus) {
    TaskGoal g;
    g.kind = Kind::Power;
    g.device = device;
    g.value = on ? 1 : 0;
    g.focus = focus;
    return g;
}

TaskGoal TaskGoal::volume(Device device, int level) {
    TaskGoal g;
    g.kind = Kind::Volume;
    g.device = device;
    g.value = level;
    return g;
}

TaskGoal TaskGoal::fan(Device device, int level) {
    TaskGoal g;
    g.kind = Kind::Fan;
    g.device = device;
    g.value = level;
    return g;
}

TaskGoal TaskGoal::station(int station) {
    TaskGoal g;
    g.kind = Kind::Station;
    g.device = Device::Radio;
    g.value = station;
    return g;
}

TaskGoal TaskGoal::outlet_is(Device device, Outlet outlet) {
    TaskGoal g;
    g.kind = Kind::Outlet;
    g.device = device;
    g.outlet = outlet;
    return g;
}

TaskGoal TaskGoal::mode_is(Mp3Mode mode, bool on) {
    TaskGoal g;
    g.kind = Kind::Mode;
    g.device = Device::Mp3;
    g.mode = mode;
    g.flag = on;
    return g;
}

bool TaskGoal::devices_satisfied(const DeviceState& d) const {
    switch (kind) {
        case Kind::Focus: return true;
        case Kind::Power: return d.powered(device) == (value != 0);
        case Kind::Volume: return d.powered(device) && d.volume(device) == value;
        case Kind::Fan: return d.powered(device) && d.fan(device) == value;
        case Kind::Station: return d.radio.power && d.radio.station == value;
        case Kind::Outlet: return d.powered(device) && d.outlet(device) == outlet;
        case Kind::Mode: return d.mp3.power && d.mode(mode) == flag;
    }
    return false;
}

bool TaskGoal::satisfied(const SystemState& s) const {
    if (focus && s.menu.focus != *focus) return false;
    return devices_satisfied(s.devices);
}

std::string TaskGoal::describe() const {
    std::string dev(to_string(device));
    std::string text;
    switch (kind) {
        case Kind::Focus: text = "menu open"; break;
        case Kind::Power: text = dev + (value ? " on" : " off"); break;
        case Kind::Volume: text = dev + " volume = " + std::to_string(value); break;
        case Kind::Fan: text = dev + " fan = " + std::to_string(value); break;
        case Kind::Station: text = "radio station = " + std::to_string(value); break;
        case Kind::Outlet: text = dev + " outlet = " + std::string(to_string(outlet)); break;
        case Kind::Mode: text = std::string("MP3 ") + std::string(to_string(mode)) + (flag ? " on" : " off"); break;
    }
    if (focus) text += " with menu " + std::string(to_string(*focus));
    return text;
}

namespace {

TaskGoal device_goal(const TaskSpec& t, const DeviceState& d) {
    const int sign = t.control == Control::Down ? -1 : 1;
    switch (t.feature) {
        case Feature::Turn: return TaskGoal::power(t.device, t.control == Control::On);
        case Feature::Volume: return TaskGoal::volume(t.device, d.volume(t.device) + sign * t.levels);
        case Feature::Airflow: return TaskGoal::fan(t.device, d.fan(t.device) + sign * t.levels);
        case Feature::Channel:
            return TaskGoal::station(d.radio.presets.at(std::get<PresetChannel>(t.option).index - 1));
        case Feature::Mode: {
            const auto mode = std::get<Mp3Mode>(t.option);
            return TaskGoal::mode_is(mode, !d.mode(mode));
        }
        case Feature::Outlet: return TaskGoal::outlet_is(t.device, std::get<Outlet>(t.option));
    }
    throw ConfigError("unsupported task feature");
}

}  // namespace

TaskGoal goal_for_task(const TaskSpec& task, const SystemState& state) {
    TaskGoal g = device_goal(task, state.devices);
    if (task.feature == Feature::Turn && task.control == Control::On) g.focus = focus_of(task.device);
    return g;
}

TaskGoal tactile_goal_for_task(const TaskSpec& task, const DeviceState& devices) {
    return device_goal(task, devices);
}

const std::vector<GestureEvent>& gesture_alphabet() {
    static const std::vector<GestureEvent> alphabet = [] {
        std::vector<GestureEvent> a;
        for (int n = 1; n <= kFingers; ++n) {
            if (n < kFingers) a.push_back(GestureEvent::hand_count(Hand::Right, n));
            a.push_back(GestureEvent::hand_count(Hand::Left, n));
        }
        a.push_back(GestureEvent::top_menu());
        a.push_back(GestureEvent::cancel());
        a.push_back(GestureEvent::system_toggle());
        return a;
    }();
    return alphabet;
}

namespace {

// Compact, ordered encoding of everything that influences future transitions.
using StateKey = std::vector<int>;

void encode(StateKey& k, const MenuState& m, const DeviceState& d) {
    const auto& r = d.radio;
    k.insert(k.end(), {static_cast<int>(m.focus), r.power, r.station, r.volume, r.presets[0], r.presets[1],
                       r.presets[2], d.mp3.power, d.mp3.volume, d.mp3.random, d.mp3.mute, d.mp3.intro, d.ac.power,
                       d.ac.fan, static_cast<int>(d.ac.outlet), d.heater.power, d.heater.fan,
                       static_cast<int>(d.heater.outlet)});
}

StateKey key_of(const SystemState& s) {
    StateKey k;
    k.reserve(40);
    encode(k, s.menu, s.devices);
    if (s.undo_snapshot) {
        k.push_back(1);
        encode(k, s.undo_snapshot->menu, s.undo_snapshot->devices);
    } else {
        k.push_back(0);
    }
    return k;
}

}  // namespace

std::vector<GestureEvent> plan_gestures(const SystemState& state, const TaskGoal& goal, const MenuLayout& layout,
                                        int max_depth) {
    if (goal.satisfied(state)) return {};
    const auto& lim = state.devices.limits;
    const bool out_of_range = (goal.kind == TaskGoal::Kind::Volume && (goal.value < 0 || goal.value > lim.max_volume)) ||
                              (goal.kind == TaskGoal::Kind::Fan && (goal.value < 1 || goal.value > lim.max_fan)) ||
                              (goal.kind == TaskGoal::Kind::Station && (goal.value < 1 || goal.value > lim.stations));
    if (out_of_range) throw UnreachableGoal("unreachable goal: " + goal.describe());

    struct Node {
        SystemState state;
        int parent;
        int via;  // alphabet index
        int depth;
    };
    const auto& alphabet = gesture_alphabet();
    std::vector<Node> nodes{{state, -1, -1, 0}};
    std::set<StateKey> seen{key_of(state)};
    std::deque<int> frontier{0};

    while (!frontier.empty()) {
        const int current = frontier.front();
        frontier.pop_front();
        if (nodes[current].depth >= max_depth) continue;
        for (int a = 0; a < static_cast<int>(alphabet.size()); ++a) {
            SystemState next = apply_gesture(nodes[current].state, alphabet[a], layout).state;
            if (!seen.insert(key_of(next)).second) continue;
            nodes.push_back({std::move(next), current, a, nodes[current].depth + 1});
            const int id = static_cast<int>(nodes.size()) - 1;
            if (goal.satisfied(nodes[id].state)) {
                std::vector<GestureEvent> plan;
                for (int n = id; nodes[n].parent >= 0; n = nodes[n].parent) plan.push_back(alphabet[nodes[n].via]);
                return {plan.rbegin(), plan.rend()};
            }
            frontier.push_back(id);
        }
    }
    throw UnreachableGoal("unreachable goal: " + goal.describe());
}

std::vector<TactileAction> plan_tactile(const DeviceState& devices, const TaskGoal& goal) {
    std::vector<TactileAction> script;
    if (goal.devices_satisfied(devices)) return script;
    const Device dev = goal.device;
    if (goal.kind == TaskGoal::Kind::Focus) return script;
    if (goal.kind == TaskGoal::Kind::Power) {
        script.push_back(tactile::PowerToggle{dev});
        return script;
    }
    if (!devices.powered(dev)) script.push_back(tactile::PowerToggle{dev});

    auto steps = [&](int from, int to, auto make) {
        for (int v = from; v != to; v += (to > from ? 1 : -1)) script.push_back(make(to > from ? 1 : -1));
    };
    switch (goal.kind) {
        case TaskGoal::Kind::Volume:
            if (goal.value < 0 || goal.value > devices.limits.max_volume) {
                throw UnreachableGoal("unreachable goal: " + goal.describe());
            }
            steps(devices.volume(dev), goal.value, [&](int d) { return TactileAction{tactile::VolumeStep{dev, d}}; });
            break;
        case TaskGoal::Kind::Fan:
            if (goal.value < 1 || goal.value > devices.limits.max_fan) {
                throw UnreachableGoal("unreachable goal: " + goal.describe());
            }
            steps(devices.fan(dev), goal.value, [&](int d) { return TactileAction{tactile::FanStep{dev, d}}; });
            break;
        case TaskGoal::Kind::Station: {
            const auto& presets = devices.radio.presets;
            for (int i = 0; i < 3; ++i) {
                if (presets[i] == goal.value) {
                    if (devices.radio.station != goal.value) script.push_back(tactile::Preset{i + 1});
                    return script;
                }
            }
            // Not a preset: step the tuner the short way round.
            const int n = devices.limits.stations;
            const int up = ((goal.value - devices.radio.station) % n + n) % n;
            const int delta = up <= n - up ? 1 : -1;
            for (int i = 0, k = delta > 0 ? up : n - up; i < k; ++i) script.push_back(tactile::ChannelStep{delta});
            break;
        }
        case TaskGoal::Kind::Outlet:
            if (devices.outlet(dev) != goal.outlet) script.push_back(tactile::OutletSelect{dev, goal.outlet});
            break;
        case TaskGoal::Kind::Mode:
            if (devices.mode(goal.mode) != goal.flag) script.push_back(tactile::ModeToggle{goal.mode});
            break;
        default: break;
    }
    return script;
}

}  // namespace fingerhud
