#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace fingerhud {

enum class Condition { Baseline, Tactile, Gesture };
inline constexpr Condition kAllConditions[] = {Condition::Baseline, Condition::Tactile, Condition::Gesture};

std::string_view to_string(Condition c);
Condition condition_from_string(std::string_view text);

// Mean-reverting noise: stationary sd `sigma`, reversion rate `theta_per_s`.
// While a task executes the innovation sd is multiplied by task_multiplier.
struct OuNoise {
    double sigma = 0.0;
    double theta_per_s = 0.1;
    double task_multiplier = 1.0;
};

struct Angles {
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;
    double roll_deg = 0.0;
};

struct ConditionParams {
    double brake_rt_mean_s = 1.0;
    double brake_rt_sd_s = 0.2;
    // One gesture (hold + release) or one button press.
    double action_time_mean_s = 1.0;
    double action_time_sd_s = 0.2;
    // Hand from wheel to console; also charged for the way back. Tactile only.
    double reach_time_s = 0.0;
    OuNoise speed_noise;
    OuNoise lateral_noise;
    // Console glances per tactile action (reach or press) and their mean length.
    double glances_per_action = 0.0;
    double off_road_glance_mean_ms = 0.0;
    // Share of the remaining time spent on mirrors and instruments.
    double other_glance_share = 0.14;
    // Share of fixations placed on the HUD while a gesture task runs.
    double hud_fixation_share = 0.0;
    Angles head_excursion;
    Angles head_excursion_sd;
};

struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

// Scene-camera pixel geometry. Forward contains the HUD; Console is disjoint.
struct AoiGeometry {
    Rect forward{260, 120, 1020, 520};
    Rect hud{440, 400, 840, 500};
    Rect console{860, 560, 1180, 720};
};

struct GazeModel {
    double fixation_mean_ms = 240.0;
    double fixation_sd_ms = 60.0;
    double jitter_px = 2.0;
    double other_glance_mean_ms = 700.0;
    double min_saccade_px = 60.0;
};

struct DriverParams {
    ConditionParams baseline;
    ConditionParams tactile;
    ConditionParams gesture;

    double subject_variability_sd = 0.10;
    double dt_s = 1.0 / 60.0;
    double utterance_s = 2.0;
    double brake_rt_floor_s = 0.2;
    double brake_drop_kmh = 20.0;
    double brake_decel_mps2 = 5.0;
    double recovery_accel_mps2 = 1.5;
    double gesture_release_s = 0.25;
    double min_press_s = 0.25;
    double glove_noise_sd = 3.0;
    int max_replans = 3;
    // Lateral noise multiplier from the road's curvature tag and near hazard tags.
    std::map<std::string, double> curvature_lateral_multiplier{{"gentle", 1.0}, {"curvy", 1.3}, {"urban", 1.15}};
    double hazard_lateral_multiplier = 1.2;
    double max_overrun_s = 60.0;
    double head_noise_sd_deg = 0.6;
    double head_theta_per_s = 2.0;
    double head_tau_s = 0.3;
    GazeModel gaze;
    AoiGeometry aoi;

    ConditionParams& of(Condition c);
    const ConditionParams& of(Condition c) const;

    void validate() const;
};

DriverParams default_params();

// Multiplies every human timing (reaction, actions, reach, glances) by factor.
DriverParams scale_timings(DriverParams params, double factor);

nlohmann::json params_to_json(const DriverParams& params);
DriverParams params_from_json(const nlohmann::json& doc);

// FNV-1a over the canonical JSON text of the parameters.
std::uint64_t param_hash(const DriverParams& params);
std::string hex_hash(std::uint64_t hash);

}  // namespace fingerhud
