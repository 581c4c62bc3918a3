#include "fingerhud/driver_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <variant>

#include "fingerhud/error.hpp"
#include "fingerhud/glove.hpp"
#include "fingerhud/menu.hpp"
#include "fingerhud/planner.hpp"
#include "fingerhud/recognizer.hpp"
#include "fingerhud/rng.hpp"

namespace fingerhud {

Aoi classify_gaze(const AoiGeometry& g, double x, double y) {
    if (g.console.contains(x, y)) return Aoi::Console;
    if (g.forward.contains(x, y)) return Aoi::Forward;
    return Aoi::Other;
}

namespace {

constexpr double kKmhPerMps = 3.6;

double quantize(double v, double step) { return std::round(v / step) * step; }

// Exact discretisation of an Ornstein-Uhlenbeck process around zero.
struct Ou {
    double x = 0.0;
    double decay = 1.0;
    double sigma = 0.0;

    Ou(double sigma_, double theta, double dt, Rng& rng) : decay(std::exp(-theta * dt)), sigma(sigma_) {
        std::normal_distribution<double> n(0.0, 1.0);
        x = sigma * n(rng);
    }
    double step(double multiplier, Rng& rng) {
        std::normal_distribution<double> n(0.0, 1.0);
        x = x * decay + sigma * multiplier * std::sqrt(1.0 - decay * decay) * n(rng);
        return x;
    }
};

enum class BrakePhase { Waiting, Braking, Recovering, Done };

struct ActiveHazard {
    std::size_t record = 0;
    double brake_at = 0.0;
    BrakePhase phase = BrakePhase::Waiting;
};

enum class PhaseKind { GestureHold, GestureRelease, Reach, Press, Return };

struct Phase {
    PhaseKind kind = PhaseKind::Reach;
    double end_t = 0.0;
    GestureEvent gesture;  // GestureHold
    FingerOrder left_order = kThumbFirst;
    FingerOrder right_order = kThumbFirst;
    std::optional<TactileAction> press;  // Press
};

struct PendingTask {
    std::size_t task = 0;
    double trigger_t = 0.0;
    double command_end_t = 0.0;
};

struct RunningTask {
    PendingTask pending;
    double start_t = 0.0;
    std::deque<Phase> phases;
    double phase_start = 0.0;
    TaskGoal goal;
    int actions = 0;
    int replans = 0;
    Angles head_target;
};

struct GazeTarget {
    double x = 640.0;
    double y = 320.0;
    double remaining_s = 0.0;
};

struct ConsoleGlance {
    double start_t = 0.0;
    double duration_s = 0.0;
};

const Rect kMirrors[] = {{560, 30, 720, 100}, {40, 300, 200, 420}, {1080, 300, 1240, 420}};

class RunSimulator {
public:
    RunSimulator(const Scenario& scenario, Condition condition, const DriverParams& params, std::uint64_t seed,
                 const SimOverrides& overrides, const MenuLayout& layout)
        : sc_(scenario),
          cond_(condition),
          p_(params),
          cp_(params.of(condition)),
          ov_(overrides),
          layout_(layout),
          speed_rng_(derive_seed(seed, {1})),
          lateral_rng_(derive_seed(seed, {2})),
          hazard_rng_(derive_seed(seed, {3})),
          action_rng_(derive_seed(seed, {4})),
          gaze_rng_(derive_seed(seed, {5})),
          head_rng_(derive_seed(seed, {6})),
          glove_rng_(derive_seed(seed, {7})),
          speed_ou_(cp_.speed_noise.sigma, cp_.speed_noise.theta_per_s, params.dt_s, speed_rng_),
          lateral_ou_(cp_.lateral_noise.sigma, cp_.lateral_noise.theta_per_s, params.dt_s, lateral_rng_),
          head_ou_{Ou(params.head_noise_sd_deg, params.head_theta_per_s, params.dt_s, head_rng_),
                   Ou(params.head_noise_sd_deg, params.head_theta_per_s, params.dt_s, head_rng_),
                   Ou(params.head_noise_sd_deg, params.head_theta_per_s, params.dt_s, head_rng_)},
          noise_(params.glove_noise_sd) {
        params.validate();
        log_.header.seed = seed;
        log_.header.condition = std::string(to_string(condition));
        log_.header.road_id = scenario.road.id;
        log_.header.subject = overrides.subject;
        log_.header.ref_speed_kmh = scenario.road.ref_speed_kmh;
        log_.header.lane_width_m = scenario.road.lane_width_m;
        log_.header.dt_s = params.dt_s;
        const auto it = params.curvature_lateral_multiplier.find(scenario.road.curvature);
        curvature_mult_ = it == params.curvature_lateral_multiplier.end() ? 1.0 : it->second;
        const double o = std::clamp(cp_.other_glance_share, 0.0, 0.95);
        const double f = params.gaze.fixation_mean_ms;
        const double m = params.gaze.other_glance_mean_ms;
        other_prob_ = o <= 0.0 ? 0.0 : o * f / (m * (1.0 - o) + o * f);
        gaze_.x = (params.aoi.forward.x0 + params.aoi.forward.x1) / 2;
        gaze_.y = (params.aoi.forward.y0 + params.aoi.forward.y1) / 2;
    }

    RunLog run() {
        const double dt = p_.dt_s;
        const double ref = sc_.road.ref_speed_kmh;
        const double t_limit = sc_.road.length_m / (ref / kKmhPerMps) + p_.max_overrun_s;
        double pos = 0.0;
        for (long k = 0;; ++k) {
            const double t = static_cast<double>(k) * dt;
            triggers(t, pos);
            hazards(t);
            tasks(t);
            const bool task_active = running_.has_value();
            const bool hazard_active = std::any_of(active_hazards_.begin(), active_hazards_.end(),
                                                   [](const ActiveHazard& h) { return h.phase != BrakePhase::Done; });

            const double sm = task_active ? cp_.speed_noise.task_multiplier : 1.0;
            double lm = curvature_mult_ * (hazard_active ? p_.hazard_lateral_multiplier : 1.0);
            if (task_active) lm *= cp_.lateral_noise.task_multiplier;
            const double xv = k == 0 ? speed_ou_.x : speed_ou_.step(sm, speed_rng_);
            const double xl = k == 0 ? lateral_ou_.x : lateral_ou_.step(lm, lateral_rng_);
            const bool braking = brake_dynamics(t);

            DriveRow row;
            row.t_s = quantize(t, 1e-6);
            row.position_m = pos;
            row.speed_kmh = quantize(std::max(0.0, ref + xv - drop_kmh_), 1e-3);
            row.lateral_offset_m = quantize(xl, 1e-4);
            row.brake = braking;
            row.active_task = task_active ? sc_.tasks[running_->pending.task].index : -1;
            if (cond_ == Condition::Gesture) row.menu_focus = state_.menu.focus;
            log_.drive.push_back(row);

            gaze(t, row.t_s);
            head(row.t_s, task_active);

            pos += row.speed_kmh / kKmhPerMps * dt;
            if (finished(pos)) break;
            if (t >= t_limit) {
                log_.header.truncated = true;
                truncate(t);
                break;
            }
        }
        return std::move(log_);
    }

private:
    void triggers(double t, double pos) {
        while (next_hazard_ < sc_.hazards.size() &&
               pos >= sc_.hazards[next_hazard_].location_m - sc_.hazard_sight_distance_m) {
            HazardRecord rec;
            rec.hazard_id = sc_.hazards[next_hazard_].task_index;
            rec.onset_t = t;
            double rt = 0.0;
            if (ov_.brake_rt_s) {
                rt = *ov_.brake_rt_s;
            } else {
                std::normal_distribution<double> n(cp_.brake_rt_mean_s, cp_.brake_rt_sd_s);
                rt = std::max(p_.brake_rt_floor_s, n(hazard_rng_));
            }
            log_.hazards.push_back(rec);
            active_hazards_.push_back({log_.hazards.size() - 1, t + rt, BrakePhase::Waiting});
            ++next_hazard_;
        }
        while (next_task_ < sc_.tasks.size() && pos >= sc_.tasks[next_task_].location_m) {
            if (cond_ != Condition::Baseline) pending_.push_back({next_task_, t, t + p_.utterance_s});
            ++next_task_;
        }
    }

    void hazards(double t) {
        for (auto& h : active_hazards_) {
            if (h.phase == BrakePhase::Waiting && t >= h.brake_at) {
                h.phase = BrakePhase::Braking;
                log_.hazards[h.record].brake_onset_t = h.brake_at;
            }
        }
    }

    // Shared speed drop for every hazard currently being braked for.
    bool brake_dynamics(double t) {
        bool any_braking = false;
        bool any_recovering = false;
        for (const auto& h : active_hazards_) {
            any_braking |= h.phase == BrakePhase::Braking;
            any_recovering |= h.phase == BrakePhase::Recovering;
        }
        const double dt = p_.dt_s;
        if (any_braking) {
            drop_kmh_ += p_.brake_decel_mps2 * kKmhPerMps * dt;
            if (drop_kmh_ >= p_.brake_drop_kmh) {
                drop_kmh_ = p_.brake_drop_kmh;
                for (auto& h : active_hazards_) {
                    if (h.phase == BrakePhase::Braking) h.phase = BrakePhase::Recovering;
                }
            }
            return true;
        }
        if (any_recovering) {
            drop_kmh_ -= p_.recovery_accel_mps2 * kKmhPerMps * dt;
            if (drop_kmh_ <= 0.0) {
                drop_kmh_ = 0.0;
                for (auto& h : active_hazards_) {
                    if (h.phase == BrakePhase::Recovering) {
                        h.phase = BrakePhase::Done;
                        log_.hazards[h.record].recovered_t = t;
                    }
                }
            }
        }
        return false;
    }

    double sample_time(double mean, double sd, double floor) {
        std::normal_distribution<double> n(mean, sd);
        return std::max(floor, n(action_rng_));
    }

    void schedule_glances(double start) {
        const double g = cp_.glances_per_action;
        if (g <= 0.0 || cp_.off_road_glance_mean_ms <= 0.0) return;
        int count = static_cast<int>(std::floor(g));
        std::bernoulli_distribution extra(g - count);
        if (extra(action_rng_)) ++count;
        const double mean = cp_.off_road_glance_mean_ms / 1000.0;
        double at = start;
        for (int i = 0; i < count; ++i) {
            const double d = sample_time(mean, 0.25 * mean, 0.1);
            glances_.push_back({at, d});
            at += d;
        }
    }

    void append_gesture_plan(RunningTask& rt, double from) {
        std::vector<GestureEvent> plan;
        try {
            plan = plan_gestures(state_, rt.goal, layout_);
        } catch (const UnreachableGoal&) {
            return;
        }
        double at = from;
        for (const auto& g : plan) {
            const double total =
                sample_time(cp_.action_time_mean_s, cp_.action_time_sd_s, p_.min_press_s + p_.gesture_release_s);
            Phase hold;
            hold.kind = PhaseKind::GestureHold;
            hold.gesture = g;
            std::iota(hold.left_order.begin(), hold.left_order.end(), 0);
            std::iota(hold.right_order.begin(), hold.right_order.end(), 0);
            std::shuffle(hold.left_order.begin(), hold.left_order.end(), glove_rng_);
            std::shuffle(hold.right_order.begin(), hold.right_order.end(), glove_rng_);
            at += total - p_.gesture_release_s;
            hold.end_t = at;
            rt.phases.push_back(hold);
            Phase rel;
            rel.kind = PhaseKind::GestureRelease;
            at += p_.gesture_release_s;
            rel.end_t = at;
            rt.phases.push_back(rel);
            ++rt.actions;
        }
    }

    void plan_tactile_task(RunningTask& rt, const TaskSpec& task, double from) {
        const auto goal = tactile_goal_for_task(task, state_.devices);
        rt.goal = goal;
        double at = from;
        Phase reach;
        reach.kind = PhaseKind::Reach;
        at += cp_.reach_time_s;
        reach.end_t = at;
        rt.phases.push_back(reach);
        for (const auto& action : plan_tactile(state_.devices, goal)) {
            Phase press;
            press.kind = PhaseKind::Press;
            press.press = action;
            at += sample_time(cp_.action_time_mean_s, cp_.action_time_sd_s, p_.min_press_s);
            press.end_t = at;
            rt.phases.push_back(press);
            ++rt.actions;
        }
        Phase back;
        back.kind = PhaseKind::Return;
        at += cp_.reach_time_s;
        back.end_t = at;
        rt.phases.push_back(back);
    }

    void start_task(const PendingTask& pt, double start) {
        RunningTask rt;
        rt.pending = pt;
        rt.start_t = start;
        rt.phase_start = start;
        const auto& task = sc_.tasks[pt.task];
        std::normal_distribution<double> z(0.0, 1.0);
        rt.head_target = {cp_.head_excursion.yaw_deg + cp_.head_excursion_sd.yaw_deg * z(head_rng_),
                          cp_.head_excursion.pitch_deg + cp_.head_excursion_sd.pitch_deg * z(head_rng_),
                          cp_.head_excursion.roll_deg + cp_.head_excursion_sd.roll_deg * z(head_rng_)};
        if (cond_ == Condition::Gesture) {
            rt.goal = goal_for_task(task, state_);
            if (!rt.goal.satisfied(state_)) append_gesture_plan(rt, start);
        } else {
            plan_tactile_task(rt, task, start);
        }
        running_ = std::move(rt);
        if (cond_ == Condition::Tactile && !running_->phases.empty()) schedule_glances(start);
    }

    void finish_task(double done) {
        auto& rt = *running_;
        TaskRecord rec;
        rec.task_id = sc_.tasks[rt.pending.task].index;
        rec.trigger_t = rt.pending.trigger_t;
        rec.command_end_t = rt.pending.command_end_t;
        rec.done_t = std::max(done, rt.pending.command_end_t);
        rec.actions = rt.actions;
        rec.goal_met = cond_ == Condition::Gesture ? rt.goal.satisfied(state_) : rt.goal.devices_satisfied(state_.devices);
        log_.tasks.push_back(rec);
        last_done_ = rec.done_t;
        running_.reset();
    }

    void complete_phase(const Phase& ph) {
        if (ph.kind == PhaseKind::Press && ph.press) {
            try {
                state_ = apply_tactile(state_, *ph.press).state;
            } catch (const DeviceOff&) {
                // wasted press; goal check reports it
            }
        }
    }

    void tasks(double t) {
        for (;;) {
            if (!running_) {
                if (pending_.empty() || pending_.front().command_end_t > t) break;
                const auto pt = pending_.front();
                pending_.pop_front();
                start_task(pt, std::max(pt.command_end_t, last_done_));
            }
            auto& rt = *running_;
            while (!rt.phases.empty() && rt.phases.front().end_t <= t) {
                const Phase ph = rt.phases.front();
                rt.phases.pop_front();
                complete_phase(ph);
                rt.phase_start = ph.end_t;
                if (cond_ == Condition::Tactile && !rt.phases.empty() && rt.phases.front().kind == PhaseKind::Press) {
                    schedule_glances(ph.end_t);
                }
            }
            if (!rt.phases.empty()) break;
            if (cond_ == Condition::Gesture && !rt.goal.satisfied(state_) && rt.replans < p_.max_replans &&
                rt.actions > 0) {
                ++rt.replans;
                append_gesture_plan(rt, rt.phase_start);
                if (!rt.phases.empty()) continue;
            }
            finish_task(rt.phase_start);
        }
        if (cond_ == Condition::Gesture) glove_frame(t);
    }

    void glove_frame(double t) {
        int left = 0;
        int right = 0;
        FingerOrder lo = kThumbFirst;
        FingerOrder ro = kThumbFirst;
        if (running_ && !running_->phases.empty() && running_->phases.front().kind == PhaseKind::GestureHold) {
            const auto& ph = running_->phases.front();
            std::tie(left, right) = counts_for(ph.gesture);
            lo = ph.left_order;
            ro = ph.right_order;
        }
        const double t_ms = t * 1000.0;
        BendSample ls{Hand::Left, bends_for_count(left, lo), t_ms};
        BendSample rs{Hand::Right, bends_for_count(right, ro), t_ms};
        noise_.apply(ls, glove_rng_);
        noise_.apply(rs, glove_rng_);
        const auto res = feed(recognizer_, hand_pose(ls, glove_), hand_pose(rs, glove_), recognizer_cfg_, t_ms);
        recognizer_ = res.state;
        if (res.event) state_ = apply_gesture(state_, *res.event, layout_).state;
    }

    void pick_point(const Rect& r, double margin) {
        std::uniform_real_distribution<double> ux(r.x0 + margin, r.x1 - margin);
        std::uniform_real_distribution<double> uy(r.y0 + margin, r.y1 - margin);
        double x = ux(gaze_rng_);
        double y = uy(gaze_rng_);
        for (int tries = 0; tries < 8 && std::hypot(x - gaze_.x, y - gaze_.y) < p_.gaze.min_saccade_px; ++tries) {
            x = ux(gaze_rng_);
            y = uy(gaze_rng_);
        }
        gaze_.x = x;
        gaze_.y = y;
    }

    void gaze(double t, double t_logged) {
        const double margin = 10.0;
        if (!glances_.empty() && glances_.front().start_t <= t) {
            pick_point(p_.aoi.console, margin);
            // Glances already overdue are merged into this one.
            double dur = 0.0;
            while (!glances_.empty() && glances_.front().start_t <= t) {
                dur += glances_.front().duration_s;
                glances_.pop_front();
            }
            gaze_.remaining_s = dur;
        } else if (gaze_.remaining_s <= 0.0) {
            std::bernoulli_distribution other(other_prob_);
            if (other(gaze_rng_)) {
                std::uniform_int_distribution<int> which(0, 2);
                pick_point(kMirrors[which(gaze_rng_)], margin);
                const double m = p_.gaze.other_glance_mean_ms / 1000.0;
                gaze_.remaining_s = sample_time_gaze(m, 0.3 * m);
            } else {
                std::bernoulli_distribution hud(cond_ == Condition::Gesture && running_ ? cp_.hud_fixation_share : 0.0);
                pick_point(hud(gaze_rng_) ? p_.aoi.hud : p_.aoi.forward, margin);
                gaze_.remaining_s =
                    sample_time_gaze(p_.gaze.fixation_mean_ms / 1000.0, p_.gaze.fixation_sd_ms / 1000.0);
            }
        }
        std::normal_distribution<double> jitter(0.0, p_.gaze.jitter_px);
        GazeRow row;
        row.t_s = t_logged;
        row.x_px = quantize(gaze_.x + jitter(gaze_rng_), 0.1);
        row.y_px = quantize(gaze_.y + jitter(gaze_rng_), 0.1);
        row.aoi = classify_gaze(p_.aoi, row.x_px, row.y_px);
        log_.gaze.push_back(row);
        gaze_.remaining_s -= p_.dt_s;
    }

    double sample_time_gaze(double mean, double sd) {
        std::normal_distribution<double> n(mean, sd);
        return std::max(0.1, n(gaze_rng_));
    }

    void head(double t_logged, bool task_active) {
        const Angles target = task_active ? running_->head_target : Angles{};
        const double a = 1.0 - std::exp(-p_.dt_s / p_.head_tau_s);
        lag_.yaw_deg += (target.yaw_deg - lag_.yaw_deg) * a;
        lag_.pitch_deg += (target.pitch_deg - lag_.pitch_deg) * a;
        lag_.roll_deg += (target.roll_deg - lag_.roll_deg) * a;
        HeadRow row;
        row.t_s = t_logged;
        row.yaw_deg = quantize(lag_.yaw_deg + head_ou_[0].step(1.0, head_rng_), 0.01);
        row.pitch_deg = quantize(lag_.pitch_deg + head_ou_[1].step(1.0, head_rng_), 0.01);
        row.roll_deg = quantize(lag_.roll_deg + head_ou_[2].step(1.0, head_rng_), 0.01);
        log_.head.push_back(row);
    }

    bool finished(double pos) const {
        if (pos < sc_.road.length_m) return false;
        if (next_task_ < sc_.tasks.size() || next_hazard_ < sc_.hazards.size()) return false;
        if (running_ || !pending_.empty()) return false;
        return std::all_of(active_hazards_.begin(), active_hazards_.end(),
                           [](const ActiveHazard& h) { return h.phase == BrakePhase::Done; });
    }

    // Close whatever is still open so every task keeps its record.
    void truncate(double t) {
        if (running_) {
            running_->phases.clear();
            finish_task(t);
            log_.tasks.back().goal_met = false;
        }
        for (const auto& pt : pending_) {
            TaskRecord rec{sc_.tasks[pt.task].index, pt.trigger_t, pt.command_end_t, std::max(t, pt.command_end_t), 0,
                           false};
            log_.tasks.push_back(rec);
        }
        pending_.clear();
    }

    const Scenario& sc_;
    Condition cond_;
    const DriverParams& p_;
    const ConditionParams& cp_;
    SimOverrides ov_;
    const MenuLayout& layout_;
    Rng speed_rng_, lateral_rng_, hazard_rng_, action_rng_, gaze_rng_, head_rng_, glove_rng_;
    Ou speed_ou_;
    Ou lateral_ou_;
    Ou head_ou_[3];
    BendNoise noise_;
    GloveConfig glove_;
    RecognizerConfig recognizer_cfg_;
    RecognizerState recognizer_;

    RunLog log_;
    SystemState state_;
    double curvature_mult_ = 1.0;
    double other_prob_ = 0.0;
    double drop_kmh_ = 0.0;
    std::size_t next_task_ = 0;
    std::size_t next_hazard_ = 0;
    std::vector<ActiveHazard> active_hazards_;
    std::deque<PendingTask> pending_;
    std::optional<RunningTask> running_;
    double last_done_ = 0.0;
    std::deque<ConsoleGlance> glances_;
    GazeTarget gaze_;
    Angles lag_;
};

}  // namespace

RunLog simulate_run(const Scenario& scenario, Condition condition, const DriverParams& params, std::uint64_t seed,
                    const SimOverrides& overrides, const MenuLayout& layout) {
    RunSimulator sim(scenario, condition, params, seed, overrides, layout);
    return sim.run();
}

}  // namespace fingerhud
