#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "fingerhud/devices.hpp"
#include "fingerhud/glove.hpp"

namespace fingerhud {

enum class MenuFocus { InterfaceOff, Top, Radio, Mp3, AC, Heater };

std::string_view to_string(MenuFocus focus);
MenuFocus focus_from_string(std::string_view text);
std::optional<Device> device_of(MenuFocus focus);
MenuFocus focus_of(Device device);

enum class ActionId {
    // Top menu
    RadioOn, Mp3On, AcOn, HeaterOn,
    RadioOff, Mp3Off, AcOff, HeaterOff,
    // Radio
    PresetCh1, PresetCh2, PresetCh3, ChannelUp, ChannelDown,
    // MP3
    ToggleRandom, ToggleMute, ToggleIntro,
    // A/C and heater
    OutletTop, OutletBilevel, OutletBottom, OutletDefrost, FanDown, FanUp,
    // Shared by submenus
    VolumeDown, VolumeUp, Back, MenuOff,
};

std::string_view to_string(ActionId action);
ActionId action_from_string(std::string_view text);
std::string_view label(ActionId action);

// Whether an action is meaningful inside a menu.
bool action_allowed(MenuFocus focus, ActionId action);

struct LayoutEntry {
    MenuFocus focus;
    Hand hand;
    int count;
    ActionId action;
};

enum class PipColor { Red, Blue };
inline PipColor pip_color(Hand hand) { return hand == Hand::Left ? PipColor::Red : PipColor::Blue; }
std::string_view to_string(PipColor color);

struct Pip {
    ActionId action;
    std::string label;
    int count;
    Hand hand;
    PipColor color;
};

class MenuLayout {
public:
    // Validates: counts in 1..5, Right-5 reserved for Cancel, no duplicate
    // (focus, hand, count), actions legal for their menu, every menu reachable
    // from Top. Throws ConfigError with the offending entry.
    explicit MenuLayout(std::vector<LayoutEntry> entries);

    std::optional<ActionId> find(MenuFocus focus, Hand hand, int count) const;
    const std::vector<LayoutEntry>& entries() const { return entries_; }
    std::vector<Pip> pips(MenuFocus focus) const;

private:
    std::vector<LayoutEntry> entries_;
    std::map<std::tuple<MenuFocus, Hand, int>, ActionId> index_;
};

const MenuLayout& default_layout();

MenuLayout load_layout(const nlohmann::json& document);
nlohmann::json export_layout(const MenuLayout& layout);

}  // namespace fingerhud
