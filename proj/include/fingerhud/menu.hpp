#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fingerhud/devices.hpp"
#include "fingerhud/layout.hpp"
#include "fingerhud/recognizer.hpp"

namespace fingerhud {

struct MenuState {
    MenuFocus focus = MenuFocus::Top;

    bool operator==(const MenuState&) const = default;
};

// The part of the system state that Cancel can restore.
struct Snapshot {
    MenuState menu;
    DeviceState devices;

    bool operator==(const Snapshot&) const = default;
};

struct SystemState {
    MenuState menu;
    DeviceState devices;
    std::optional<Snapshot> undo_snapshot;  // one level only

    bool operator==(const SystemState&) const = default;

    Snapshot snapshot() const { return {menu, devices}; }
    bool same_visible(const SystemState& other) const { return menu == other.menu && devices == other.devices; }
};

enum class FeedbackKind { Verbal, Tone, DeviceSound };

struct FeedbackEvent {
    FeedbackKind kind = FeedbackKind::Tone;
    std::string text;  // device name for Verbal and DeviceSound

    bool operator==(const FeedbackEvent&) const = default;
};

std::string_view to_string(FeedbackKind kind);

struct Transition {
    SystemState state;
    std::vector<FeedbackEvent> feedback;
    std::optional<ActionId> action;  // resolved layout action, if any
};

Transition apply_gesture(const SystemState& state, const GestureEvent& event,
                         const MenuLayout& layout = default_layout());

// Console buttons and knobs of the baseline interface; the menu focus is left
// alone. Throws DeviceOff for anything but PowerToggle on a powered-off device.
Transition apply_tactile(const SystemState& state, const TactileAction& action);

}  // namespace fingerhud
