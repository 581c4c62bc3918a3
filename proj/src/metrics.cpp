#include "fingerhud/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fingerhud/error.hpp"

namespace fingerhud {

std::vector<TimeWindow> whole_run(std::span<const DriveRow> rows) {
    if (rows.empty()) return {};
    return {{rows.front().t_s, rows.back().t_s}};
}

namespace {

std::vector<TimeWindow> subtract(const std::vector<TimeWindow>& windows, const TimeWindow& cut) {
    std::vector<TimeWindow> out;
    for (const auto& w : windows) {
        if (cut.t1 < w.t0 || cut.t0 > w.t1) {
            out.push_back(w);
            continue;
        }
        if (cut.t0 > w.t0) out.push_back({w.t0, std::nextafter(cut.t0, -std::numeric_limits<double>::infinity())});
        if (cut.t1 < w.t1) out.push_back({std::nextafter(cut.t1, std::numeric_limits<double>::infinity()), w.t1});
    }
    return out;
}

template <class Row, class F>
double rms_over(std::span<const Row> rows, std::span<const TimeWindow> windows, F&& deviation) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
        const bool in = std::any_of(windows.begin(), windows.end(), [&](const TimeWindow& w) { return w.contains(r.t_s); });
        if (!in) continue;
        const double d = deviation(r);
        sum += d * d;
        ++n;
    }
    if (n == 0) throw DataError("empty window selection: no samples fall inside the requested windows");
    return std::sqrt(sum / static_cast<double>(n));
}

}  // namespace

std::vector<TimeWindow> analysis_windows(const RunLog& log) {
    std::vector<TimeWindow> windows;
    if (log.tasks.empty()) {
        windows = whole_run(log.drive);
    } else {
        for (const auto& t : log.tasks) windows.push_back({t.command_end_t, t.done_t});
    }
    const double end = log.drive.empty() ? 0.0 : log.drive.back().t_s;
    for (const auto& h : log.hazards) {
        windows = subtract(windows, {h.onset_t, h.recovered_t.value_or(std::max(end, h.onset_t))});
    }
    return windows;
}

double speed_rmse(std::span<const DriveRow> rows, double ref, std::span<const TimeWindow> windows) {
    return rms_over(rows, windows, [ref](const DriveRow& r) { return r.speed_kmh - ref; });
}

double lateral_rmse(std::span<const DriveRow> rows, std::span<const TimeWindow> windows) {
    return rms_over(rows, windows, [](const DriveRow& r) { return r.lateral_offset_m; });
}

BrakeTimes brake_response_times(std::span<const HazardRecord> hazards) {
    BrakeTimes out;
    for (const auto& h : hazards) {
        if (!h.brake_onset_t) {
            ++out.missing;
            continue;
        }
        if (*h.brake_onset_t < h.onset_t) {
            throw DataError("hazard " + std::to_string(h.hazard_id) + ": brake before onset");
        }
        out.times_s.push_back(*h.brake_onset_t - h.onset_t);
    }
    return out;
}

std::vector<double> task_completion_times(std::span<const TaskRecord> tasks) {
    std::vector<double> out;
    out.reserve(tasks.size());
    for (const auto& t : tasks) {
        if (t.done_t < t.command_end_t) {
            throw DataError("task " + std::to_string(t.task_id) + ": done_t " + format_number(t.done_t) +
                            " is before command_end_t " + format_number(t.command_end_t));
        }
        out.push_back(t.done_t - t.command_end_t);
    }
    return out;
}

double aoi_attention_ratio(std::span<const GazeRow> rows, Aoi aoi) {
    if (rows.empty()) throw DataError("empty gaze log");
    const auto n = std::count_if(rows.begin(), rows.end(), [aoi](const GazeRow& g) { return g.aoi == aoi; });
    return 100.0 * static_cast<double>(n) / static_cast<double>(rows.size());
}

std::vector<Fixation> detect_fixations(std::span<const GazeRow> rows, double dispersion_px, double min_duration_ms,
                                       double period) {
    std::vector<Fixation> out;
    if (rows.empty()) return out;
    if (period <= 0.0) period = rows.size() >= 2 ? rows[1].t_s - rows[0].t_s : 0.0;
    if (period <= 0.0) return out;
    const auto min_samples =
        static_cast<std::size_t>(std::max(1.0, std::ceil(min_duration_ms / 1000.0 / period - 1e-9)));
    const std::size_t n = rows.size();
    std::size_t i = 0;
    while (i + min_samples <= n) {
        double x0 = rows[i].x_px, x1 = x0, y0 = rows[i].y_px, y1 = y0;
        auto fits = [&](std::size_t k) {
            const double nx0 = std::min(x0, rows[k].x_px), nx1 = std::max(x1, rows[k].x_px);
            const double ny0 = std::min(y0, rows[k].y_px), ny1 = std::max(y1, rows[k].y_px);
            return std::hypot(nx1 - nx0, ny1 - ny0) <= dispersion_px;
        };
        auto take = [&](std::size_t k) {
            x0 = std::min(x0, rows[k].x_px);
            x1 = std::max(x1, rows[k].x_px);
            y0 = std::min(y0, rows[k].y_px);
            y1 = std::max(y1, rows[k].y_px);
        };
        std::size_t j = i;
        bool ok = true;
        while (j + 1 < i + min_samples) {
            if (!fits(j + 1)) {
                ok = false;
                break;
            }
            take(++j);
        }
        if (!ok) {
            ++i;
            continue;
        }
        while (j + 1 < n && fits(j + 1)) take(++j);
        Fixation f;
        f.first = i;
        f.last = j;
        f.start_t = rows[i].t_s;
        f.end_t = rows[j].t_s + period;
        double sx = 0.0, sy = 0.0;
        for (std::size_t k = i; k <= j; ++k) {
            sx += rows[k].x_px;
            sy += rows[k].y_px;
        }
        f.x_px = sx / static_cast<double>(j - i + 1);
        f.y_px = sy / static_cast<double>(j - i + 1);
        out.push_back(f);
        i = j + 1;
    }
    return out;
}

std::pair<double, double> eye_activity(std::span<const GazeRow> rows) {
    if (rows.size() < 2) throw DataError("eye activity needs at least 2 gaze samples");
    double mx = 0.0, my = 0.0;
    for (const auto& g : rows) {
        mx += g.x_px;
        my += g.y_px;
    }
    const auto n = static_cast<double>(rows.size());
    mx /= n;
    my /= n;
    double vx = 0.0, vy = 0.0;
    for (const auto& g : rows) {
        vx += (g.x_px - mx) * (g.x_px - mx);
        vy += (g.y_px - my) * (g.y_px - my);
    }
    return {std::sqrt(vx / n), std::sqrt(vy / n)};
}

std::vector<Angles> head_extrema(std::span<const HeadRow> rows, std::span<const TimeWindow> windows) {
    std::vector<Angles> out;
    for (const auto& w : windows) {
        bool any = false;
        Angles best;
        auto keep = [](double& cur, double v) {
            if (std::abs(v) > std::abs(cur)) cur = v;
        };
        for (const auto& h : rows) {
            if (!w.contains(h.t_s)) continue;
            if (!any) {
                best = {h.yaw_deg, h.pitch_deg, h.roll_deg};
                any = true;
                continue;
            }
            keep(best.yaw_deg, h.yaw_deg);
            keep(best.pitch_deg, h.pitch_deg);
            keep(best.roll_deg, h.roll_deg);
        }
        if (!any) {
            throw DataError("empty head window [" + format_number(w.t0) + ", " + format_number(w.t1) + "]");
        }
        out.push_back(best);
    }
    return out;
}

const std::vector<MetricInfo>& metric_catalog() {
    static const std::vector<MetricInfo> catalog{
        {"speed_rmse", "km/h", "Speed deviation (RMSE)"},
        {"lateral_rmse", "m", "Lateral deviation (RMSE)"},
        {"lateral_rmse_pct", "%", "Lateral deviation (% of half lane width)"},
        {"brake_rt", "s", "Brake response time"},
        {"task_time", "s", "Task completion time"},
        {"forward_aoi", "%", "Attention ratio, forward AOI"},
        {"console_aoi", "%", "Attention ratio, console AOI"},
        {"other_aoi", "%", "Attention ratio, other"},
        {"fixation_duration", "ms", "Mean fixation duration"},
        {"eye_activity_h", "px", "Eye activity, horizontal SD"},
        {"eye_activity_v", "px", "Eye activity, vertical SD"},
        {"head_yaw", "deg", "Maximum head yaw"},
        {"head_pitch", "deg", "Maximum head pitch"},
        {"head_roll", "deg", "Maximum head roll"},
    };
    return catalog;
}

const MetricInfo& metric_info(const std::string& name) {
    for (const auto& m : metric_catalog()) {
        if (name == m.name) return m;
    }
    throw DataError("unknown metric '" + name + "'");
}

namespace {

template <class F>
std::optional<double> attempt(F&& f) {
    try {
        return f();
    } catch (const DataError&) {
        return std::nullopt;
    }
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

RunMetrics compute_run_metrics(const RunLog& log, int subject, Condition condition, int road_id) {
    RunMetrics m;
    m.subject = subject;
    m.condition = condition;
    m.road_id = road_id;

    const auto windows = analysis_windows(log);
    m.speed_rmse_kmh = attempt([&] { return speed_rmse(log.drive, log.header.ref_speed_kmh, windows); });
    m.lateral_rmse_m = attempt([&] { return lateral_rmse(log.drive, windows); });
    if (m.lateral_rmse_m && log.header.lane_width_m > 0) {
        m.lateral_rmse_pct = *m.lateral_rmse_m / (log.header.lane_width_m / 2.0) * 100.0;
    }

    const auto brakes = brake_response_times(log.hazards);
    m.hazards = static_cast<int>(log.hazards.size());
    m.brakes_missing = brakes.missing;
    if (!brakes.times_s.empty()) m.brake_rt_s = mean_of(brakes.times_s);

    m.tasks = static_cast<int>(log.tasks.size());
    if (!log.tasks.empty()) {
        m.task_time_s = mean_of(task_completion_times(log.tasks));
        m.tasks_failed =
            static_cast<int>(std::count_if(log.tasks.begin(), log.tasks.end(), [](const TaskRecord& t) { return !t.goal_met; }));
        std::vector<TimeWindow> tw;
        for (const auto& t : log.tasks) tw.push_back({t.command_end_t, t.done_t});
        try {
            const auto ex = head_extrema(log.head, tw);
            Angles a;
            for (const auto& e : ex) {
                a.yaw_deg += e.yaw_deg;
                a.pitch_deg += e.pitch_deg;
                a.roll_deg += e.roll_deg;
            }
            const auto n = static_cast<double>(ex.size());
            m.head = Angles{a.yaw_deg / n, a.pitch_deg / n, a.roll_deg / n};
        } catch (const DataError&) {
        }
    }

    if (!log.gaze.empty()) {
        m.forward_pct = aoi_attention_ratio(log.gaze, Aoi::Forward);
        m.console_pct = aoi_attention_ratio(log.gaze, Aoi::Console);
        m.other_pct = aoi_attention_ratio(log.gaze, Aoi::Other);
        const auto fx = detect_fixations(log.gaze, 50.0, 100.0, log.header.dt_s);
        if (!fx.empty()) {
            double s = 0.0;
            for (const auto& f : fx) s += f.duration_ms();
            m.fixation_ms = s / static_cast<double>(fx.size());
        }
        if (log.gaze.size() >= 2) {
            const auto [h, v] = eye_activity(log.gaze);
            m.eye_h_px = h;
            m.eye_v_px = v;
        }
    }
    return m;
}

std::vector<MetricRow> RunMetrics::rows() const {
    std::vector<MetricRow> out;
    const std::string cond(to_string(condition));
    auto add = [&](const char* name, const std::optional<double>& v) {
        if (v) out.push_back({subject, cond, road_id, name, *v, metric_info(name).unit});
    };
    add("speed_rmse", speed_rmse_kmh);
    add("lateral_rmse", lateral_rmse_m);
    add("lateral_rmse_pct", lateral_rmse_pct);
    add("brake_rt", brake_rt_s);
    add("task_time", task_time_s);
    add("forward_aoi", forward_pct);
    add("console_aoi", console_pct);
    add("other_aoi", other_pct);
    add("fixation_duration", fixation_ms);
    add("eye_activity_h", eye_h_px);
    add("eye_activity_v", eye_v_px);
    if (head) {
        add("head_yaw", head->yaw_deg);
        add("head_pitch", head->pitch_deg);
        add("head_roll", head->roll_deg);
    }
    return out;
}

std::string metrics_to_csv(std::span<const MetricRow> rows) {
    std::string s = "subject,condition,road,metric,value,unit\n";
    for (const auto& r : rows) {
        s += std::to_string(r.subject) + "," + r.condition + "," + std::to_string(r.road) + "," + r.metric + "," +
             format_number(r.value) + "," + r.unit + "\n";
    }
    return s;
}

}  // namespace fingerhud
