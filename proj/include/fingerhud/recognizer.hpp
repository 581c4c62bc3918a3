#pragma once

#include <optional>
#include <string>
#include <utility>

#include "fingerhud/glove.hpp"

namespace fingerhud {

enum class GestureKind { HandCount, SystemToggle, Cancel, TopMenu };

struct GestureEvent {
    GestureKind kind = GestureKind::HandCount;
    Hand hand = Hand::Right;  // HandCount only
    int count = 0;            // HandCount only, 1..5
    double t_ms = 0.0;

    static GestureEvent hand_count(Hand hand, int n, double t_ms = 0.0);
    static GestureEvent system_toggle(double t_ms = 0.0) { return {GestureKind::SystemToggle, Hand::Right, 0, t_ms}; }
    static GestureEvent cancel(double t_ms = 0.0) { return {GestureKind::Cancel, Hand::Right, 0, t_ms}; }
    static GestureEvent top_menu(double t_ms = 0.0) { return {GestureKind::TopMenu, Hand::Right, 0, t_ms}; }

    // Same gesture, ignoring the timestamp.
    bool same_gesture(const GestureEvent& other) const {
        return kind == other.kind && (kind != GestureKind::HandCount || (hand == other.hand && count == other.count));
    }
};

std::string describe(const GestureEvent& event);

// Finger counts (left, right) that produce a gesture when held.
std::pair<int, int> counts_for(const GestureEvent& event);

// Precedence: (5,5) toggle, (1,1) top menu, (0,5) cancel, one-hand counts.
// Any other two-hand combination has no meaning.
std::optional<GestureEvent> gesture_for_counts(int left, int right, double t_ms);

struct RecognizerConfig {
    int dwell_frames = 12;
    bool require_release = true;

    void validate() const;
};

enum class RecognizerPhase { Idle, Holding, Latched };

struct RecognizerState {
    RecognizerPhase phase = RecognizerPhase::Idle;
    std::pair<int, int> candidate{0, 0};
    int frames_held = 0;
    std::optional<GestureEvent> last_event;
    // Held two-hand combinations that map to nothing.
    long unrecognized = 0;
};

struct FeedResult {
    RecognizerState state;
    std::optional<GestureEvent> event;
};

// Pure transition: one frame of poses in, at most one event out.
FeedResult feed(const RecognizerState& state, const HandPose& left, const HandPose& right,
                const RecognizerConfig& config, double t_ms = 0.0);

RecognizerState reset(const RecognizerState& state);

// Owning convenience wrapper for streams.
class Recognizer {
public:
    explicit Recognizer(RecognizerConfig config = {}, GloveConfig glove = {});

    std::optional<GestureEvent> push(const SamplePair& frame);
    void reset();

    const RecognizerState& state() const { return state_; }
    const RecognizerConfig& config() const { return config_; }
    const GloveConfig& glove() const { return glove_; }

private:
    RecognizerConfig config_;
    GloveConfig glove_;
    RecognizerState state_;
};

}  // namespace fingerhud
