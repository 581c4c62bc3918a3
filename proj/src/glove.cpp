#include "fingerhud/glove.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fingerhud/error.hpp"

namespace fingerhud {

std::string_view to_string(Hand hand) { return hand == Hand::Left ? "Left" : "Right"; }

Hand hand_from_string(std::string_view text) {
    if (text == "Left" || text == "left") return Hand::Left;
    if (text == "Right" || text == "right") return Hand::Right;
    throw ValidationError("unknown hand '" + std::string(text) + "'");
}

void GloveConfig::validate() const {
    if (threshold <= kMinBend || threshold >= kMaxBend) {
        throw ValidationError("glove threshold " + std::to_string(threshold) + " outside (0, 63)");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw ValidationError("glove sample rate must be positive");
    }
}

FingerPose classify_finger(int bend, const GloveConfig& config) {
    if (bend < kMinBend || bend > kMaxBend) {
        throw ValidationError("bend value " + std::to_string(bend) + " outside [0, 63]");
    }
    return bend > config.threshold ? FingerPose::Spread : FingerPose::Closed;
}

HandPose hand_pose(const BendSample& sample, const GloveConfig& config) {
    HandPose pose;
    pose.hand = sample.hand;
    for (int i = 0; i < kFingers; ++i) {
        pose.poses[i] = classify_finger(sample.bends[i], config);
        if (pose.poses[i] == FingerPose::Spread) ++pose.spread_count;
    }
    return pose;
}

Bends bends_for_count(int count, const FingerOrder& order) {
    if (count < 0 || count > kFingers) {
        throw ValidationError("finger count " + std::to_string(count) + " outside [0, 5]");
    }
    Bends bends;
    bends.fill(kClosedBend);
    for (int i = 0; i < count; ++i) bends[order[i]] = kSpreadBend;
    return bends;
}

int frames_for_hold(double hold_ms, const GloveConfig& config) {
    const auto frames = std::lround(hold_ms * config.sample_rate_hz / 1000.0);
    return static_cast<int>(std::max<long>(frames, 1));
}

std::vector<SamplePair> synth_stream(std::span<const ScriptStep> script, const GloveConfig& config,
                                     double start_ms, const FingerOrder& left_order,
                                     const FingerOrder& right_order) {
    config.validate();
    std::vector<SamplePair> out;
    const double period = config.frame_period_ms();
    long frame = 0;
    for (const auto& step : script) {
        if (!(step.hold_ms > 0.0)) {
            throw ValidationError("script hold duration must be positive");
        }
        const Bends left = bends_for_count(step.left, left_order);
        const Bends right = bends_for_count(step.right, right_order);
        const int n = frames_for_hold(step.hold_ms, config);
        for (int i = 0; i < n; ++i, ++frame) {
            const double t = start_ms + static_cast<double>(frame) * period;
            out.push_back({BendSample{Hand::Left, left, t}, BendSample{Hand::Right, right, t}});
        }
    }
    return out;
}

void KeyMap::validate() const {
    std::set<std::string> seen;
    for (const auto* side : {&left, &right}) {
        for (const auto& key : *side) {
            if (key.empty()) throw ConfigError("key map contains an empty key name");
            if (!seen.insert(key).second) throw ConfigError("key '" + key + "' mapped twice");
        }
    }
}

SamplePair bends_from_keys(std::span<const std::string> pressed, const KeyMap& keys, double t_ms) {
    auto is_held = [&](const std::string& key) {
        return std::find(pressed.begin(), pressed.end(), key) != pressed.end();
    };
    SamplePair pair{BendSample{Hand::Left, {}, t_ms}, BendSample{Hand::Right, {}, t_ms}};
    for (int i = 0; i < kFingers; ++i) {
        pair.left.bends[i] = is_held(keys.left[i]) ? kSpreadBend : kClosedBend;
        pair.right.bends[i] = is_held(keys.right[i]) ? kSpreadBend : kClosedBend;
    }
    return pair;
}

}  // namespace fingerhud
