#include "fingerhud/driver_params.hpp"

#include <cstdio>

#include "fingerhud/error.hpp"

namespace fingerhud {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OuNoise, sigma, theta_per_s, task_multiplier)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Angles, yaw_deg, pitch_deg, roll_deg)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ConditionParams, brake_rt_mean_s, brake_rt_sd_s, action_time_mean_s,
                                                action_time_sd_s, reach_time_s, speed_noise, lateral_noise,
                                                glances_per_action, off_road_glance_mean_ms, other_glance_share,
                                                hud_fixation_share, head_excursion, head_excursion_sd)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Rect, x0, y0, x1, y1)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AoiGeometry, forward, hud, console)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GazeModel, fixation_mean_ms, fixation_sd_ms, jitter_px,
                                                other_glance_mean_ms, min_saccade_px)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DriverParams, baseline, tactile, gesture, subject_variability_sd, dt_s,
                                                utterance_s, brake_rt_floor_s, brake_drop_kmh, brake_decel_mps2,
                                                recovery_accel_mps2, gesture_release_s, min_press_s, glove_noise_sd,
                                                max_replans, curvature_lateral_multiplier, hazard_lateral_multiplier,
                                                max_overrun_s, head_noise_sd_deg, head_theta_per_s, head_tau_s, gaze,
                                                aoi)

std::string_view to_string(Condition c) {
    switch (c) {
        case Condition::Baseline: return "baseline";
        case Condition::Tactile: return "tactile";
        case Condition::Gesture: return "gesture";
    }
    return "?";
}

Condition condition_from_string(std::string_view text) {
    if (text == "baseline") return Condition::Baseline;
    if (text == "tactile") return Condition::Tactile;
    if (text == "gesture") return Condition::Gesture;
    throw ConfigError("unknown condition '" + std::string(text) + "'");
}

ConditionParams& DriverParams::of(Condition c) {
    switch (c) {
        case Condition::Baseline: return baseline;
        case Condition::Tactile: return tactile;
        case Condition::Gesture: return gesture;
    }
    return baseline;
}

const ConditionParams& DriverParams::of(Condition c) const { return const_cast<DriverParams*>(this)->of(c); }

void DriverParams::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("driver params: " + what); };
    for (auto c : kAllConditions) {
        const auto& p = of(c);
        const std::string name(to_string(c));
        if (!(p.brake_rt_mean_s > 0.0) || !(p.action_time_mean_s > 0.0)) fail(name + ": times must be > 0");
        if (p.brake_rt_sd_s < 0.0 || p.action_time_sd_s < 0.0) fail(name + ": sds must be >= 0");
        if (p.reach_time_s < 0.0 || p.off_road_glance_mean_ms < 0.0 || p.glances_per_action < 0.0) {
            fail(name + ": glance and reach parameters must be >= 0");
        }
        for (const auto* n : {&p.speed_noise, &p.lateral_noise}) {
            if (n->sigma < 0.0) fail(name + ": noise sigma must be >= 0");
            if (!(n->theta_per_s > 0.0)) fail(name + ": noise theta must be > 0");
            if (n->task_multiplier < 1.0) fail(name + ": task multipliers must be >= 1");
        }
        if (p.other_glance_share < 0.0 || p.other_glance_share >= 1.0) fail(name + ": other_glance_share in [0,1)");
        if (p.hud_fixation_share < 0.0 || p.hud_fixation_share > 1.0) fail(name + ": hud_fixation_share in [0,1]");
    }
    if (!(dt_s > 0.0)) fail("dt must be > 0");
    if (subject_variability_sd < 0.0) fail("subject_variability_sd must be >= 0");
    if (!(utterance_s >= 0.0) || !(brake_rt_floor_s > 0.0)) fail("utterance/brake floor");
    if (!(brake_drop_kmh > 0.0) || !(brake_decel_mps2 > 0.0) || !(recovery_accel_mps2 > 0.0)) fail("brake dynamics");
    if (!(gesture_release_s > 0.0) || !(min_press_s > 0.0)) fail("action minimums must be > 0");
    if (glove_noise_sd < 0.0) fail("glove_noise_sd must be >= 0");
    if (hazard_lateral_multiplier < 1.0) fail("hazard_lateral_multiplier must be >= 1");
    for (const auto& [k, v] : curvature_lateral_multiplier) {
        if (v < 1.0) fail("curvature multiplier for '" + k + "' must be >= 1");
    }
    if (!(gaze.fixation_mean_ms > 0.0) || !(gaze.other_glance_mean_ms > 0.0)) fail("gaze durations must be > 0");
}

DriverParams default_params() {
    DriverParams p;

    const OuNoise speed{1.5, 0.1, 1.0};
    const OuNoise lateral{0.18, 0.3, 1.0};

    auto& b = p.baseline;
    b.brake_rt_mean_s = 1.00;
    b.brake_rt_sd_s = 0.20;
    b.speed_noise = speed;
    b.lateral_noise = lateral;
    b.other_glance_share = 0.1394;

    auto& t = p.tactile;
    t = b;
    t.brake_rt_mean_s = 1.19 * b.brake_rt_mean_s;
    t.brake_rt_sd_s = 0.22;
    t.action_time_mean_s = 0.80;
    t.action_time_sd_s = 0.15;
    t.reach_time_s = 0.63;
    t.speed_noise.task_multiplier = 1.05;
    t.lateral_noise.task_multiplier = 1.05;
    t.glances_per_action = 1.0;
    t.off_road_glance_mean_ms = 600.0;
    t.head_excursion = {-5.1, -4.6, -1.0};
    t.head_excursion_sd = {4.6, 4.3, 2.0};

    auto& g = p.gesture;
    g = b;
    g.brake_rt_mean_s = 1.00 * b.brake_rt_mean_s;
    g.action_time_mean_s = 1.00;
    g.action_time_sd_s = 0.15;
    g.speed_noise.task_multiplier = 1.02;
    g.lateral_noise.task_multiplier = 1.03;
    g.other_glance_share = 0.1311;
    g.hud_fixation_share = 0.5;
    g.head_excursion = {2.6, -1.4, 0.5};
    g.head_excursion_sd = {3.0, 3.1, 1.5};
    return p;
}

DriverParams scale_timings(DriverParams p, double f) {
    for (auto c : kAllConditions) {
        auto& cp = p.of(c);
        cp.brake_rt_mean_s *= f;
        cp.action_time_mean_s *= f;
        cp.reach_time_s *= f;
        cp.off_road_glance_mean_ms *= f;
    }
    return p;
}

nlohmann::json params_to_json(const DriverParams& params) { return params; }

DriverParams params_from_json(const nlohmann::json& doc) {
    DriverParams p;
    try {
        p = doc.get<DriverParams>();
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("driver params: ") + ex.what());
    }
    p.validate();
    return p;
}

std::uint64_t param_hash(const DriverParams& params) {
    const std::string text = params_to_json(params).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex_hash(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace fingerhud
