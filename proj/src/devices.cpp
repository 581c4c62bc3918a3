#include "fingerhud/devices.hpp"

#include <algorithm>

#include "fingerhud/error.hpp"

namespace fingerhud {

std::string_view to_string(Device device) {
    switch (device) {
        case Device::Radio: return "Radio";
        case Device::Mp3: return "MP3";
        case Device::AC: return "AC";
        case Device::Heater: return "Heater";
    }
    return "?";
}

std::string_view to_string(Outlet outlet) {
    switch (outlet) {
        case Outlet::Top: return "Top";
        case Outlet::Bilevel: return "Bilevel";
        case Outlet::Bottom: return "Bottom";
        case Outlet::Defrost: return "Defrost";
    }
    return "?";
}

std::string_view to_string(Mp3Mode mode) {
    switch (mode) {
        case Mp3Mode::Random: return "Random";
        case Mp3Mode::Mute: return "Mute";
        case Mp3Mode::Intro: return "Intro";
    }
    return "?";
}

namespace {
std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}
}  // namespace

Device device_from_string(std::string_view text) {
    const auto t = lower(text);
    if (t == "radio") return Device::Radio;
    if (t == "mp3") return Device::Mp3;
    if (t == "ac" || t == "a/c") return Device::AC;
    if (t == "heater") return Device::Heater;
    throw ConfigError("unknown device '" + std::string(text) + "'");
}

Outlet outlet_from_string(std::string_view text) {
    const auto t = lower(text);
    if (t == "top") return Outlet::Top;
    if (t == "bilevel") return Outlet::Bilevel;
    if (t == "bottom") return Outlet::Bottom;
    if (t == "defrost") return Outlet::Defrost;
    throw ConfigError("unknown outlet '" + std::string(text) + "'");
}

Mp3Mode mp3_mode_from_string(std::string_view text) {
    const auto t = lower(text);
    if (t == "random") return Mp3Mode::Random;
    if (t == "mute") return Mp3Mode::Mute;
    if (t == "intro") return Mp3Mode::Intro;
    throw ConfigError("unknown MP3 mode '" + std::string(text) + "'");
}

std::string_view spoken_name(Device device) {
    switch (device) {
        case Device::Radio: return "radio";
        case Device::Mp3: return "mp3";
        case Device::AC: return "air conditioner";
        case Device::Heater: return "heater";
    }
    return "?";
}

void DeviceLimits::validate() const {
    if (stations < 3) throw ConfigError("station list must hold at least the three presets");
    if (max_volume < 1) throw ConfigError("max volume must be >= 1");
    if (max_fan < 1) throw ConfigError("max fan level must be >= 1");
}

bool DeviceState::powered(Device device) const {
    switch (device) {
        case Device::Radio: return radio.power;
        case Device::Mp3: return mp3.power;
        case Device::AC: return ac.power;
        case Device::Heater: return heater.power;
    }
    return false;
}

int DeviceState::volume(Device device) const {
    if (device == Device::Radio) return radio.volume;
    if (device == Device::Mp3) return mp3.volume;
    throw ValidationError(std::string(to_string(device)) + " has no volume");
}

ClimateState& DeviceState::climate(Device device) {
    if (device == Device::AC) return ac;
    if (device == Device::Heater) return heater;
    throw ValidationError(std::string(to_string(device)) + " has no fan or outlet");
}

const ClimateState& DeviceState::climate(Device device) const {
    return const_cast<DeviceState*>(this)->climate(device);
}

int DeviceState::fan(Device device) const { return climate(device).fan; }
Outlet DeviceState::outlet(Device device) const { return climate(device).outlet; }

bool DeviceState::mode(Mp3Mode m) const {
    switch (m) {
        case Mp3Mode::Random: return mp3.random;
        case Mp3Mode::Mute: return mp3.mute;
        case Mp3Mode::Intro: return mp3.intro;
    }
    return false;
}

void DeviceState::validate() const {
    limits.validate();
    auto in = [](int v, int lo, int hi) { return v >= lo && v <= hi; };
    if (!in(radio.station, 1, limits.stations)) throw ConfigError("radio station out of range");
    for (int p : radio.presets) {
        if (!in(p, 1, limits.stations)) throw ConfigError("preset channel " + std::to_string(p) + " is not a station");
    }
    if (!in(radio.volume, 0, limits.max_volume) || !in(mp3.volume, 0, limits.max_volume)) {
        throw ConfigError("volume out of range");
    }
    if (!in(ac.fan, 1, limits.max_fan) || !in(heater.fan, 1, limits.max_fan)) {
        throw ConfigError("fan level out of range");
    }
}

namespace device_ops {

namespace {
bool assign(int& slot, int value) {
    if (slot == value) return false;
    slot = value;
    return true;
}
bool assign(bool& slot, bool value) {
    if (slot == value) return false;
    slot = value;
    return true;
}
int unit_step(int delta) {
    if (delta != 1 && delta != -1) throw ValidationError("step must be +1 or -1");
    return delta;
}
}  // namespace

bool set_power(DeviceState& s, Device device, bool on) {
    switch (device) {
        case Device::Radio: return assign(s.radio.power, on);
        case Device::Mp3: return assign(s.mp3.power, on);
        case Device::AC: return assign(s.ac.power, on);
        case Device::Heater: return assign(s.heater.power, on);
    }
    return false;
}

bool step_volume(DeviceState& s, Device device, int delta) {
    int& v = device == Device::Radio ? s.radio.volume
             : device == Device::Mp3 ? s.mp3.volume
                                     : throw ValidationError(std::string(to_string(device)) + " has no volume");
    return assign(v, std::clamp(v + unit_step(delta), 0, s.limits.max_volume));
}

bool step_fan(DeviceState& s, Device device, int delta) {
    int& f = s.climate(device).fan;
    return assign(f, std::clamp(f + unit_step(delta), 1, s.limits.max_fan));
}

bool select_preset(DeviceState& s, int preset_1based) {
    if (preset_1based < 1 || preset_1based > 3) {
        throw ValidationError("preset " + std::to_string(preset_1based) + " outside [1, 3]");
    }
    return assign(s.radio.station, s.radio.presets[preset_1based - 1]);
}

bool step_channel(DeviceState& s, int delta) {
    const int n = s.limits.stations;
    const int next = ((s.radio.station - 1 + unit_step(delta)) % n + n) % n + 1;
    return assign(s.radio.station, next);
}

bool select_outlet(DeviceState& s, Device device, Outlet outlet) {
    auto& c = s.climate(device);
    if (c.outlet == outlet) return false;
    c.outlet = outlet;
    return true;
}

bool toggle_mode(DeviceState& s, Mp3Mode mode) {
    switch (mode) {
        case Mp3Mode::Random: s.mp3.random = !s.mp3.random; break;
        case Mp3Mode::Mute: s.mp3.mute = !s.mp3.mute; break;
        case Mp3Mode::Intro: s.mp3.intro = !s.mp3.intro; break;
    }
    return true;
}

}  // namespace device_ops

std::string describe(const TactileAction& action) {
    auto sign = [](int d) { return d > 0 ? std::string("+1") : std::string("-1"); };
    return std::visit(
        [&](const auto& a) -> std::string {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, tactile::PowerToggle>) {
                return "PowerToggle(" + std::string(to_string(a.device)) + ")";
            } else if constexpr (std::is_same_v<T, tactile::VolumeStep>) {
                return "VolumeStep(" + std::string(to_string(a.device)) + "," + sign(a.delta) + ")";
            } else if constexpr (std::is_same_v<T, tactile::FanStep>) {
                return "FanStep(" + std::string(to_string(a.device)) + "," + sign(a.delta) + ")";
            } else if constexpr (std::is_same_v<T, tactile::Preset>) {
                return "Preset(" + std::to_string(a.index) + ")";
            } else if constexpr (std::is_same_v<T, tactile::ChannelStep>) {
                return "ChannelStep(" + sign(a.delta) + ")";
            } else if constexpr (std::is_same_v<T, tactile::OutletSelect>) {
                return "OutletSelect(" + std::string(to_string(a.device)) + "," + std::string(to_string(a.outlet)) + ")";
            } else {
                return "ModeToggle(" + std::string(to_string(a.mode)) + ")";
            }
        },
        action);
}

}  // namespace fingerhud
