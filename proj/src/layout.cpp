#include "fingerhud/layout.hpp"

#include <array>
#include <set>

#include "fingerhud/error.hpp"

namespace fingerhud {

namespace {

constexpr std::array kFocusNames{
    std::pair{MenuFocus::InterfaceOff, "InterfaceOff"}, std::pair{MenuFocus::Top, "Top"},
    std::pair{MenuFocus::Radio, "Radio"},               std::pair{MenuFocus::Mp3, "Mp3"},
    std::pair{MenuFocus::AC, "AC"},                     std::pair{MenuFocus::Heater, "Heater"},
};

struct ActionInfo {
    ActionId id;
    const char* name;
    const char* label;
};

constexpr std::array kActions{
    ActionInfo{ActionId::RadioOn, "RadioOn", "RADIO ON"},
    ActionInfo{ActionId::Mp3On, "Mp3On", "MP3 ON"},
    ActionInfo{ActionId::AcOn, "AcOn", "A/C ON"},
    ActionInfo{ActionId::HeaterOn, "HeaterOn", "HEATER ON"},
    ActionInfo{ActionId::RadioOff, "RadioOff", "RADIO OFF"},
    ActionInfo{ActionId::Mp3Off, "Mp3Off", "MP3 OFF"},
    ActionInfo{ActionId::AcOff, "AcOff", "A/C OFF"},
    ActionInfo{ActionId::HeaterOff, "HeaterOff", "HEATER OFF"},
    ActionInfo{ActionId::PresetCh1, "PresetCh1", "CH1"},
    ActionInfo{ActionId::PresetCh2, "PresetCh2", "CH2"},
    ActionInfo{ActionId::PresetCh3, "PresetCh3", "CH3"},
    ActionInfo{ActionId::ChannelUp, "ChannelUp", "CH UP"},
    ActionInfo{ActionId::ChannelDown, "ChannelDown", "CH DOWN"},
    ActionInfo{ActionId::ToggleRandom, "ToggleRandom", "RANDOM"},
    ActionInfo{ActionId::ToggleMute, "ToggleMute", "MUTE"},
    ActionInfo{ActionId::ToggleIntro, "ToggleIntro", "INTRO"},
    ActionInfo{ActionId::OutletTop, "OutletTop", "TOP"},
    ActionInfo{ActionId::OutletBilevel, "OutletBilevel", "BI-LEVEL"},
    ActionInfo{ActionId::OutletBottom, "OutletBottom", "BOTTOM"},
    ActionInfo{ActionId::OutletDefrost, "OutletDefrost", "DEFROST"},
    ActionInfo{ActionId::FanDown, "FanDown", "FAN -"},
    ActionInfo{ActionId::FanUp, "FanUp", "FAN +"},
    ActionInfo{ActionId::VolumeDown, "VolumeDown", "VOL -"},
    ActionInfo{ActionId::VolumeUp, "VolumeUp", "VOL +"},
    ActionInfo{ActionId::Back, "Back", "BACK"},
    ActionInfo{ActionId::MenuOff, "MenuOff", "OFF"},
};

const ActionInfo& info(ActionId id) {
    for (const auto& a : kActions) {
        if (a.id == id) return a;
    }
    throw ConfigError("unknown action id");
}

std::string where(const LayoutEntry& e) {
    return "(" + std::string(to_string(e.focus)) + ", " + std::string(to_string(e.hand)) + ", " +
           std::to_string(e.count) + ")";
}

bool enters(ActionId action, MenuFocus focus) {
    switch (action) {
        case ActionId::RadioOn: return focus == MenuFocus::Radio;
        case ActionId::Mp3On: return focus == MenuFocus::Mp3;
        case ActionId::AcOn: return focus == MenuFocus::AC;
        case ActionId::HeaterOn: return focus == MenuFocus::Heater;
        default: return false;
    }
}

}  // namespace

std::string_view to_string(MenuFocus focus) {
    for (const auto& [f, name] : kFocusNames) {
        if (f == focus) return name;
    }
    return "?";
}

MenuFocus focus_from_string(std::string_view text) {
    for (const auto& [f, name] : kFocusNames) {
        if (text == name) return f;
    }
    throw ConfigError("unknown menu focus '" + std::string(text) + "'");
}

std::optional<Device> device_of(MenuFocus focus) {
    switch (focus) {
        case MenuFocus::Radio: return Device::Radio;
        case MenuFocus::Mp3: return Device::Mp3;
        case MenuFocus::AC: return Device::AC;
        case MenuFocus::Heater: return Device::Heater;
        default: return std::nullopt;
    }
}

MenuFocus focus_of(Device device) {
    switch (device) {
        case Device::Radio: return MenuFocus::Radio;
        case Device::Mp3: return MenuFocus::Mp3;
        case Device::AC: return MenuFocus::AC;
        case Device::Heater: return MenuFocus::Heater;
    }
    return MenuFocus::Top;
}

std::string_view to_string(ActionId action) { return info(action).name; }
std::string_view label(ActionId action) { return info(action).label; }

ActionId action_from_string(std::string_view text) {
    for (const auto& a : kActions) {
        if (text == a.name) return a.id;
    }
    throw ConfigError("unknown action '" + std::string(text) + "'");
}

std::string_view to_string(PipColor color) { return color == PipColor::Red ? "red" : "blue"; }

bool action_allowed(MenuFocus focus, ActionId action) {
    const auto a = static_cast<int>(action);
    auto between = [a](ActionId lo, ActionId hi) { return a >= static_cast<int>(lo) && a <= static_cast<int>(hi); };
    const bool shared = between(ActionId::VolumeDown, ActionId::MenuOff);
    const bool submenu_nav = action == ActionId::Back || action == ActionId::MenuOff;
    switch (focus) {
        case MenuFocus::Top: return between(ActionId::RadioOn, ActionId::HeaterOff);
        case MenuFocus::Radio: return between(ActionId::PresetCh1, ActionId::ChannelDown) || shared;
        case MenuFocus::Mp3: return between(ActionId::ToggleRandom, ActionId::ToggleIntro) || shared;
        case MenuFocus::AC:
        case MenuFocus::Heater: return between(ActionId::OutletTop, ActionId::FanUp) || submenu_nav;
        case MenuFocus::InterfaceOff: return false;
    }
    return false;
}

MenuLayout::MenuLayout(std::vector<LayoutEntry> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
        if (e.count < 1 || e.count > kFingers) {
            throw ConfigError("layout entry " + where(e) + ": count must be in 1..5");
        }
        if (e.hand == Hand::Right && e.count == 5) {
            throw ConfigError("layout entry " + where(e) + ": right-hand 5 is reserved for Cancel");
        }
        if (e.focus == MenuFocus::InterfaceOff) {
            throw ConfigError("layout entry " + where(e) + ": nothing can be mapped while the interface is off");
        }
        if (!action_allowed(e.focus, e.action)) {
            throw ConfigError("layout entry " + where(e) + ": action " + std::string(to_string(e.action)) +
                              " is not available in menu " + std::string(to_string(e.focus)));
        }
        if (!index_.emplace(std::tuple{e.focus, e.hand, e.count}, e.action).second) {
            throw ConfigError("duplicate layout key " + where(e));
        }
    }
    std::set<MenuFocus> reachable{MenuFocus::Top};
    for (const auto& e : entries_) {
        if (e.focus != MenuFocus::Top) continue;
        for (auto f : {MenuFocus::Radio, MenuFocus::Mp3, MenuFocus::AC, MenuFocus::Heater}) {
            if (enters(e.action, f)) reachable.insert(f);
        }
    }
    if (!index_.empty() && std::none_of(entries_.begin(), entries_.end(),
                                        [](const LayoutEntry& e) { return e.focus == MenuFocus::Top; })) {
        throw ConfigError("unreachable actions: layout has no Top menu entries");
    }
    for (const auto& e : entries_) {
        if (!reachable.count(e.focus)) {
            throw ConfigError("unreachable action " + std::string(to_string(e.action)) + " at " + where(e) +
                              ": no Top entry opens menu " + std::string(to_string(e.focus)));
        }
    }
}

std::optional<ActionId> MenuLayout::find(MenuFocus focus, Hand hand, int count) const {
    auto it = index_.find({focus, hand, count});
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<Pip> MenuLayout::pips(MenuFocus focus) const {
    std::vector<Pip> out;
    for (const auto& e : entries_) {
        if (e.focus == focus) out.push_back({e.action, std::string(label(e.action)), e.count, e.hand, pip_color(e.hand)});
    }
    return out;
}

const MenuLayout& default_layout() {
    static const MenuLayout layout = [] {
        using enum ActionId;
        const auto L = Hand::Left;
        const auto R = Hand::Right;
        std::vector<LayoutEntry> e{
            {MenuFocus::Top, R, 1, RadioOn},  {MenuFocus::Top, R, 2, Mp3On},
            {MenuFocus::Top, R, 3, AcOn},     {MenuFocus::Top, R, 4, HeaterOn},
            {MenuFocus::Top, L, 1, RadioOff}, {MenuFocus::Top, L, 2, Mp3Off},
            {MenuFocus::Top, L, 3, AcOff},    {MenuFocus::Top, L, 4, HeaterOff},
        };
        auto audio_right = [&](MenuFocus f) {
            e.push_back({f, R, 1, VolumeDown});
            e.push_back({f, R, 2, VolumeUp});
            e.push_back({f, R, 3, Back});
            e.push_back({f, R, 4, MenuOff});
        };
        e.push_back({MenuFocus::Radio, L, 1, PresetCh1});
        e.push_back({MenuFocus::Radio, L, 2, PresetCh2});
        e.push_back({MenuFocus::Radio, L, 3, PresetCh3});
        e.push_back({MenuFocus::Radio, L, 4, ChannelUp});
        e.push_back({MenuFocus::Radio, L, 5, ChannelDown});
        audio_right(MenuFocus::Radio);
        e.push_back({MenuFocus::Mp3, L, 1, ToggleRandom});
        e.push_back({MenuFocus::Mp3, L, 2, ToggleMute});
        e.push_back({MenuFocus::Mp3, L, 3, ToggleIntro});
        audio_right(MenuFocus::Mp3);
        for (auto f : {MenuFocus::AC, MenuFocus::Heater}) {
            e.push_back({f, L, 1, OutletTop});
            e.push_back({f, L, 2, OutletBilevel});
            e.push_back({f, L, 3, OutletBottom});
            e.push_back({f, L, 4, OutletDefrost});
            e.push_back({f, R, 1, FanDown});
            e.push_back({f, R, 2, FanUp});
            e.push_back({f, R, 3, Back});
            e.push_back({f, R, 4, MenuOff});
        }
        return MenuLayout(std::move(e));
    }();
    return layout;
}

MenuLayout load_layout(const nlohmann::json& document) {
    if (!document.is_object() || !document.contains("entries") || !document["entries"].is_array()) {
        throw ConfigError("layout document must be an object with an 'entries' array");
    }
    std::vector<LayoutEntry> entries;
    std::size_t row = 0;
    for (const auto& item : document["entries"]) {
        try {
            entries.push_back({focus_from_string(item.at("focus").get<std::string>()),
                               hand_from_string(item.at("hand").get<std::string>()), item.at("count").get<int>(),
                               action_from_string(item.at("action").get<std::string>())});
        } catch (const nlohmann::json::exception& ex) {
            throw ConfigError("layout entry " + std::to_string(row) + ": " + ex.what());
        } catch (const Error& ex) {
            throw ConfigError("layout entry " + std::to_string(row) + ": " + ex.what());
        }
        ++row;
    }
    return MenuLayout(std::move(entries));
}

nlohmann::json export_layout(const MenuLayout& layout) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : layout.entries()) {
        entries.push_back({{"focus", to_string(e.focus)},
                           {"hand", to_string(e.hand)},
                           {"count", e.count},
                           {"action", to_string(e.action)},
                           {"label", label(e.action)},
                           {"pip_count", e.count},
                           {"pip_color", to_string(pip_color(e.hand))}});
    }
    return {{"schema", "fingerhud-layout"}, {"version", 1}, {"entries", entries}};
}

}  // namespace fingerhud
