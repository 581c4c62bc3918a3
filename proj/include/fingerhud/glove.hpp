#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fingerhud {

enum class Hand { Left, Right };
enum class FingerPose { Spread, Closed };

std::string_view to_string(Hand hand);
Hand hand_from_string(std::string_view text);

inline constexpr int kFingers = 5;
inline constexpr int kMinBend = 0;
inline constexpr int kMaxBend = 63;

// Bend values used when a finger is synthesised (script or virtual glove).
inline constexpr int kSpreadBend = 60;
inline constexpr int kClosedBend = 5;

// Fingers are ordered thumb, index, middle, ring, little.
using Bends = std::array<int, kFingers>;

struct BendSample {
    Hand hand = Hand::Left;
    Bends bends{};
    double t_ms = 0.0;

    bool operator==(const BendSample&) const = default;
};

struct SamplePair {
    BendSample left;
    BendSample right;
};

struct HandPose {
    Hand hand = Hand::Left;
    std::array<FingerPose, kFingers> poses{};
    int spread_count = 0;
};

struct GloveConfig {
    int threshold = 30;
    double sample_rate_hz = 60.0;

    void validate() const;
    double frame_period_ms() const { return 1000.0 / sample_rate_hz; }
};

// Spread iff bend > threshold. Throws ValidationError for bends outside [0, 63].
FingerPose classify_finger(int bend, const GloveConfig& config);

HandPose hand_pose(const BendSample& sample, const GloveConfig& config);

// One scripted hold: spread counts for each hand, held for hold_ms.
struct ScriptStep {
    int left = 0;
    int right = 0;
    double hold_ms = 0.0;
};

// Which fingers realise a count. Default spreads thumb first; the order is a
// permutation of 0..4 and only its first n entries matter.
using FingerOrder = std::array<int, kFingers>;
inline constexpr FingerOrder kThumbFirst{0, 1, 2, 3, 4};

Bends bends_for_count(int count, const FingerOrder& order = kThumbFirst);

// Frame count for a hold: round(hold_ms * rate / 1000), at least one frame.
int frames_for_hold(double hold_ms, const GloveConfig& config);

std::vector<SamplePair> synth_stream(std::span<const ScriptStep> script, const GloveConfig& config,
                                     double start_ms = 0.0,
                                     const FingerOrder& left_order = kThumbFirst,
                                     const FingerOrder& right_order = kThumbFirst);

// Additive integer-rounded Gaussian noise clamped to [0, 63].
class BendNoise {
public:
    explicit BendNoise(double sd = 3.0) : sd_(sd) {}

    template <class Rng>
    void apply(BendSample& sample, Rng& rng) const {
        if (sd_ <= 0.0) return;
        std::normal_distribution<double> dist(0.0, sd_);
        for (int& b : sample.bends) {
            const long v = b + std::lround(dist(rng));
            b = static_cast<int>(std::clamp<long>(v, kMinBend, kMaxBend));
        }
    }

    double sd() const { return sd_; }

private:
    double sd_;
};

// Keyboard stand-in for the glove: ten key names, five per hand in finger order.
// A held key means the finger is spread.
struct KeyMap {
    std::array<std::string, kFingers> left{"g", "f", "d", "s", "a"};
    std::array<std::string, kFingers> right{"h", "j", "k", "l", ";"};

    void validate() const;
};

SamplePair bends_from_keys(std::span<const std::string> pressed, const KeyMap& keys, double t_ms);

}  // namespace fingerhud
