#include "fingerhud/recognizer.hpp"

#include "fingerhud/error.hpp"

namespace fingerhud {

GestureEvent GestureEvent::hand_count(Hand hand, int n, double t_ms) {
    if (n < 1 || n > kFingers) {
        throw ValidationError("hand count " + std::to_string(n) + " outside [1, 5]");
    }
    return {GestureKind::HandCount, hand, n, t_ms};
}

std::string describe(const GestureEvent& event) {
    switch (event.kind) {
        case GestureKind::SystemToggle: return "SystemToggle";
        case GestureKind::Cancel: return "Cancel";
        case GestureKind::TopMenu: return "TopMenu";
        case GestureKind::HandCount:
            return std::string(to_string(event.hand)) + "-" + std::to_string(event.count);
    }
    return "?";
}

std::pair<int, int> counts_for(const GestureEvent& event) {
    switch (event.kind) {
        case GestureKind::SystemToggle: return {5, 5};
        case GestureKind::TopMenu: return {1, 1};
        case GestureKind::Cancel: return {0, 5};
        case GestureKind::HandCount:
            return event.hand == Hand::Left ? std::pair{event.count, 0} : std::pair{0, event.count};
    }
    return {0, 0};
}

std::optional<GestureEvent> gesture_for_counts(int left, int right, double t_ms) {
    if (left == 5 && right == 5) return GestureEvent::system_toggle(t_ms);
    if (left == 1 && right == 1) return GestureEvent::top_menu(t_ms);
    if (left == 0 && right == 5) return GestureEvent::cancel(t_ms);
    if (left > 0 && right == 0) return GestureEvent::hand_count(Hand::Left, left, t_ms);
    if (left == 0 && right > 0) return GestureEvent::hand_count(Hand::Right, right, t_ms);
    return std::nullopt;
}

void RecognizerConfig::validate() const {
    if (dwell_frames < 1) throw ValidationError("dwell_frames must be >= 1");
}

FeedResult feed(const RecognizerState& state, const HandPose& left, const HandPose& right,
                const RecognizerConfig& config, double t_ms) {
    FeedResult out{state, std::nullopt};
    RecognizerState& next = out.state;
    const std::pair<int, int> counts{left.spread_count, right.spread_count};
    const bool released = counts == std::pair{0, 0};

    if (next.phase == RecognizerPhase::Latched) {
        // Without require_release any change of configuration re-arms.
        if (released || (!config.require_release && counts != next.candidate)) {
            next.phase = RecognizerPhase::Idle;
            next.candidate = {0, 0};
            next.frames_held = 0;
        } else {
            return out;
        }
    }

    if (released) {
        next.phase = RecognizerPhase::Idle;
        next.candidate = {0, 0};
        next.frames_held = 0;
        return out;
    }

    if (next.phase == RecognizerPhase::Holding && counts == next.candidate) {
        ++next.frames_held;
    } else {
        next.phase = RecognizerPhase::Holding;
        next.candidate = counts;
        next.frames_held = 1;
    }

    if (next.frames_held == config.dwell_frames) {
        if (auto event = gesture_for_counts(counts.first, counts.second, t_ms)) {
            next.phase = RecognizerPhase::Latched;
            next.last_event = event;
            out.event = event;
        } else {
            ++next.unrecognized;
        }
    }
    return out;
}

RecognizerState reset(const RecognizerState&) { return RecognizerState{}; }

Recognizer::Recognizer(RecognizerConfig config, GloveConfig glove) : config_(config), glove_(glove) {
    config_.validate();
    glove_.validate();
}

std::optional<GestureEvent> Recognizer::push(const SamplePair& frame) {
    auto result = feed(state_, hand_pose(frame.left, glove_), hand_pose(frame.right, glove_), config_,
                       frame.right.t_ms);
    state_ = result.state;
    return result.event;
}

void Recognizer::reset() { state_ = fingerhud::reset(state_); }

}  // namespace fingerhud
