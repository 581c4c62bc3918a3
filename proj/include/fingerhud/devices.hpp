#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fingerhud {

enum class Device { Radio, Mp3, AC, Heater };
enum class Outlet { Top, Bilevel, Bottom, Defrost };
enum class Mp3Mode { Random, Mute, Intro };

std::string_view to_string(Device device);
std::string_view to_string(Outlet outlet);
std::string_view to_string(Mp3Mode mode);
Device device_from_string(std::string_view text);
Outlet outlet_from_string(std::string_view text);
Mp3Mode mp3_mode_from_string(std::string_view text);

// Spoken name used for verbal feedback.
std::string_view spoken_name(Device device);

inline constexpr std::array kAllDevices{Device::Radio, Device::Mp3, Device::AC, Device::Heater};

struct DeviceLimits {
    int stations = 10;
    int max_volume = 30;
    int max_fan = 4;

    bool operator==(const DeviceLimits&) const = default;
    void validate() const;
};

struct RadioState {
    bool power = false;
    int station = 5;
    std::array<int, 3> presets{1, 2, 3};
    int volume = 10;

    bool operator==(const RadioState&) const = default;
};

struct Mp3State {
    bool power = false;
    int volume = 10;
    bool random = false;
    bool mute = false;
    bool intro = false;

    bool operator==(const Mp3State&) const = default;
};

// A/C and heater share one shape.
struct ClimateState {
    bool power = false;
    int fan = 2;
    Outlet outlet = Outlet::Bilevel;

    bool operator==(const ClimateState&) const = default;
};

struct DeviceState {
    RadioState radio;
    Mp3State mp3;
    ClimateState ac;
    ClimateState heater;
    DeviceLimits limits;

    bool operator==(const DeviceState&) const = default;

    bool powered(Device device) const;
    int volume(Device device) const;  // Radio or Mp3
    int fan(Device device) const;     // AC or Heater
    Outlet outlet(Device device) const;
    bool mode(Mp3Mode mode) const;

    ClimateState& climate(Device device);
    const ClimateState& climate(Device device) const;

    void validate() const;
};

// Every mutation returns whether the state actually changed. Volume and fan
// saturate at their bounds; channel stepping wraps around the station list.
namespace device_ops {
bool set_power(DeviceState& s, Device device, bool on);
bool step_volume(DeviceState& s, Device device, int delta);
bool step_fan(DeviceState& s, Device device, int delta);
bool select_preset(DeviceState& s, int preset_1based);
bool step_channel(DeviceState& s, int delta);
bool select_outlet(DeviceState& s, Device device, Outlet outlet);
bool toggle_mode(DeviceState& s, Mp3Mode mode);
}  // namespace device_ops

namespace tactile {
struct PowerToggle {
    Device device;
};
struct VolumeStep {
    Device device;
    int delta;
};
struct FanStep {
    Device device;
    int delta;
};
struct Preset {
    int index;  // 1..3
};
struct ChannelStep {
    int delta;
};
struct OutletSelect {
    Device device;
    Outlet outlet;
};
struct ModeToggle {
    Mp3Mode mode;
};
}  // namespace tactile

using TactileAction = std::variant<tactile::PowerToggle, tactile::VolumeStep, tactile::FanStep, tactile::Preset,
                                   tactile::ChannelStep, tactile::OutletSelect, tactile::ModeToggle>;

std::string describe(const TactileAction& action);

}  // namespace fingerhud
