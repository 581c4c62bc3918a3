#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fingerhud/menu.hpp"
#include "fingerhud/scenario.hpp"

namespace fingerhud {

// A predicate over SystemState. Device targets are absolute; relative task
// wording ("volume up two levels") is resolved against the state at task start
// by goal_for_task.
struct TaskGoal {
    enum class Kind { Focus, Power, Volume, Fan, Station, Outlet, Mode };

    Kind kind = Kind::Focus;
    Device device = Device::Radio;
    int value = 0;  // power (0/1), volume, fan, station
    Outlet outlet = Outlet::Top;
    Mp3Mode mode = Mp3Mode::Mute;
    bool flag = false;  // mode flag target
    std::optional<MenuFocus> focus;

    static TaskGoal in_menu(MenuFocus focus);
    static TaskGoal power(Device device, bool on, std::optional<MenuFocus> focus = std::nullopt);
    static TaskGoal volume(Device device, int level);
    static TaskGoal fan(Device device, int level);
    static TaskGoal station(int station);
    static TaskGoal outlet_is(Device device, Outlet outlet);
    static TaskGoal mode_is(Mp3Mode mode, bool on);

    bool devices_satisfied(const DeviceState& devices) const;
    bool satisfied(const SystemState& state) const;
    std::string describe() const;
};

// "Turn On" also requires the device's menu to be open, so re-selecting an
// already-on device is still one selection rather than a no-op.
TaskGoal goal_for_task(const TaskSpec& task, const SystemState& state);

// Device-only version of the goal for the console interface.
TaskGoal tactile_goal_for_task(const TaskSpec& task, const DeviceState& devices);

// Gestures the planner may use, in tie-break order: lower counts first, right
// before left at equal counts, then the two-hand hotkeys. Right-5 is absent
// because that pose is Cancel.
const std::vector<GestureEvent>& gesture_alphabet();

// Breadth-first search over apply_gesture transitions. Returns a shortest
// sequence; among shortest, the lexicographically first in alphabet order.
std::vector<GestureEvent> plan_gestures(const SystemState& state, const TaskGoal& goal,
                                        const MenuLayout& layout = default_layout(), int max_depth = 16);

// Direct console script: power on if needed, then the steps.
std::vector<TactileAction> plan_tactile(const DeviceState& devices, const TaskGoal& goal);

}  // namespace fingerhud
