#include "fingerhud/menu.hpp"

#include "fingerhud/error.hpp"

namespace fingerhud {

std::string_view to_string(FeedbackKind kind) {
    switch (kind) {
        case FeedbackKind::Verbal: return "Verbal";
        case FeedbackKind::Tone: return "Tone";
        case FeedbackKind::DeviceSound: return "DeviceSound";
    }
    return "?";
}

namespace {

FeedbackEvent tone() { return {FeedbackKind::Tone, {}}; }
FeedbackEvent verbal(Device d) { return {FeedbackKind::Verbal, std::string(spoken_name(d))}; }
FeedbackEvent device_sound(Device d) { return {FeedbackKind::DeviceSound, std::string(spoken_name(d))}; }

// Commits `next` over `prior`, recording the undo snapshot only when
// something visible changed.
SystemState commit(const SystemState& prior, Snapshot next) {
    if (next.menu == prior.menu && next.devices == prior.devices) return prior;
    return SystemState{next.menu, next.devices, prior.snapshot()};
}

Device submenu_device(const SystemState& s) {
    auto d = device_of(s.menu.focus);
    if (!d) throw ConfigError("submenu action outside a device menu");
    return *d;
}

Snapshot run_action(const SystemState& s, ActionId action, std::vector<FeedbackEvent>& fb) {
    Snapshot next = s.snapshot();
    auto power_on_and_enter = [&](Device d) {
        device_ops::set_power(next.devices, d, true);
        next.menu.focus = focus_of(d);
        fb.push_back(verbal(d));
    };
    auto power_off = [&](Device d) {
        device_ops::set_power(next.devices, d, false);
        fb.push_back(verbal(d));
    };
    using enum ActionId;
    switch (action) {
        case RadioOn: power_on_and_enter(Device::Radio); break;
        case Mp3On: power_on_and_enter(Device::Mp3); break;
        case AcOn: power_on_and_enter(Device::AC); break;
        case HeaterOn: power_on_and_enter(Device::Heater); break;
        case RadioOff: power_off(Device::Radio); break;
        case Mp3Off: power_off(Device::Mp3); break;
        case AcOff: power_off(Device::AC); break;
        case HeaterOff: power_off(Device::Heater); break;
        case PresetCh1:
        case PresetCh2:
        case PresetCh3:
            device_ops::select_preset(next.devices, static_cast<int>(action) - static_cast<int>(PresetCh1) + 1);
            fb.push_back(device_sound(Device::Radio));
            break;
        case ChannelUp:
        case ChannelDown:
            device_ops::step_channel(next.devices, action == ChannelUp ? 1 : -1);
            fb.push_back(device_sound(Device::Radio));
            break;
        case ToggleRandom:
        case ToggleMute:
        case ToggleIntro: {
            const auto mode = action == ToggleRandom ? Mp3Mode::Random
                              : action == ToggleMute ? Mp3Mode::Mute
                                                     : Mp3Mode::Intro;
            device_ops::toggle_mode(next.devices, mode);
            fb.push_back(device_sound(Device::Mp3));
            break;
        }
        case OutletTop:
        case OutletBilevel:
        case OutletBottom:
        case OutletDefrost:
            device_ops::select_outlet(next.devices, submenu_device(s),
                                      static_cast<Outlet>(static_cast<int>(action) - static_cast<int>(OutletTop)));
            fb.push_back(tone());
            break;
        case FanDown:
        case FanUp:
            device_ops::step_fan(next.devices, submenu_device(s), action == FanUp ? 1 : -1);
            fb.push_back(tone());
            break;
        case VolumeDown:
        case VolumeUp:
            device_ops::step_volume(next.devices, submenu_device(s), action == VolumeUp ? 1 : -1);
            fb.push_back(tone());
            break;
        case Back:
        case MenuOff:
            next.menu.focus = MenuFocus::Top;
            fb.push_back(tone());
            break;
    }
    return next;
}

}  // namespace

Transition apply_gesture(const SystemState& state, const GestureEvent& event, const MenuLayout& layout) {
    Transition out{state, {}, std::nullopt};
    const MenuFocus focus = state.menu.focus;

    if (focus == MenuFocus::InterfaceOff) {
        if (event.kind == GestureKind::SystemToggle) {
            out.state = commit(state, {MenuState{MenuFocus::Top}, state.devices});
            out.feedback.push_back(tone());
        }
        return out;
    }

    switch (event.kind) {
        case GestureKind::SystemToggle:
            out.state = commit(state, {MenuState{MenuFocus::InterfaceOff}, state.devices});
            out.feedback.push_back(tone());
            break;
        case GestureKind::TopMenu:
            out.state = commit(state, {MenuState{MenuFocus::Top}, state.devices});
            out.feedback.push_back(tone());
            break;
        case GestureKind::Cancel:
            if (state.undo_snapshot) {
                out.state = SystemState{state.undo_snapshot->menu, state.undo_snapshot->devices, std::nullopt};
            }
            out.feedback.push_back(tone());
            break;
        case GestureKind::HandCount: {
            const auto action = layout.find(focus, event.hand, event.count);
            if (!action) {
                out.feedback.push_back(tone());
                break;
            }
            out.action = action;
            out.state = commit(state, run_action(state, *action, out.feedback));
            break;
        }
    }
    return out;
}

Transition apply_tactile(const SystemState& state, const TactileAction& action) {
    Transition out{state, {}, std::nullopt};
    DeviceState& dev = out.state.devices;
    auto require_on = [&](Device d) {
        if (!state.devices.powered(d)) {
            throw DeviceOff(describe(action) + " rejected: device off");
        }
    };
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, tactile::PowerToggle>) {
                device_ops::set_power(dev, a.device, !dev.powered(a.device));
                out.feedback.push_back(tone());
            } else if constexpr (std::is_same_v<T, tactile::VolumeStep>) {
                require_on(a.device);
                device_ops::step_volume(dev, a.device, a.delta);
                out.feedback.push_back(tone());
            } else if constexpr (std::is_same_v<T, tactile::FanStep>) {
                require_on(a.device);
                device_ops::step_fan(dev, a.device, a.delta);
                out.feedback.push_back(tone());
            } else if constexpr (std::is_same_v<T, tactile::Preset>) {
                require_on(Device::Radio);
                device_ops::select_preset(dev, a.index);
                out.feedback.push_back(device_sound(Device::Radio));
            } else if constexpr (std::is_same_v<T, tactile::ChannelStep>) {
                require_on(Device::Radio);
                device_ops::step_channel(dev, a.delta);
                out.feedback.push_back(device_sound(Device::Radio));
            } else if constexpr (std::is_same_v<T, tactile::OutletSelect>) {
                require_on(a.device);
                device_ops::select_outlet(dev, a.device, a.outlet);
                out.feedback.push_back(tone());
            } else {
                require_on(Device::Mp3);
                device_ops::toggle_mode(dev, a.mode);
                out.feedback.push_back(device_sound(Device::Mp3));
            }
        },
        action);
    return out;
}

}  // namespace fingerhud
