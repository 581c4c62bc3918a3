#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fingerhud/driver_params.hpp"
#include "fingerhud/runlog.hpp"

namespace fingerhud {

// Closed time interval in seconds.
struct TimeWindow {
    double t0 = 0.0;
    double t1 = 0.0;

    bool contains(double t) const { return t >= t0 && t <= t1; }
    bool operator==(const TimeWindow&) const = default;
};

std::vector<TimeWindow> whole_run(std::span<const DriveRow> rows);

// Windows the driving metrics are taken over: the task windows
// [command_end, done] when the run has tasks, the whole run otherwise, with
// every hazard response (onset until recovered) cut out.
std::vector<TimeWindow> analysis_windows(const RunLog& log);

// Root mean square over the rows whose time falls in any window. A row is
// counted once even when windows overlap. Throws DataError on an empty selection.
double speed_rmse(std::span<const DriveRow> rows, double ref_speed_kmh, std::span<const TimeWindow> windows);
double lateral_rmse(std::span<const DriveRow> rows, std::span<const TimeWindow> windows);

struct BrakeTimes {
    std::vector<double> times_s;
    int missing = 0;  // hazards without a brake before the run ended
};
BrakeTimes brake_response_times(std::span<const HazardRecord> hazards);

// done - command_end per record; DataError when a record is inverted.
std::vector<double> task_completion_times(std::span<const TaskRecord> tasks);

// Percentage of sample dwell time spent in the AOI. DataError when empty.
double aoi_attention_ratio(std::span<const GazeRow> rows, Aoi aoi);

struct Fixation {
    double start_t = 0.0;
    double end_t = 0.0;
    double x_px = 0.0;
    double y_px = 0.0;
    std::size_t first = 0;  // sample indices, inclusive
    std::size_t last = 0;

    double duration_ms() const { return (end_t - start_t) * 1000.0; }
};

// Dispersion-threshold identification. A window of samples i..j lasts
// (j - i + 1) sample periods and its dispersion is the diagonal of its
// bounding box. Greedy, left to right, each window grown as far as it goes.
// sample_period_s <= 0 takes the spacing of the first two rows.
std::vector<Fixation> detect_fixations(std::span<const GazeRow> rows, double dispersion_px = 50.0,
                                       double min_duration_ms = 100.0, double sample_period_s = 0.0);

// Population standard deviation of x and y. DataError for fewer than 2 rows.
std::pair<double, double> eye_activity(std::span<const GazeRow> rows);

// Per window and axis, the sample of largest magnitude with its sign. The
// earliest sample wins a tie. DataError for a window without samples.
std::vector<Angles> head_extrema(std::span<const HeadRow> rows, std::span<const TimeWindow> windows);

struct MetricRow {
    int subject = 0;
    std::string condition;
    int road = 0;
    std::string metric;
    double value = 0.0;
    std::string unit;

    bool operator==(const MetricRow&) const = default;
};

struct MetricInfo {
    const char* name;
    const char* unit;
    const char* title;
};

// Fixed measure list, in report order.
const std::vector<MetricInfo>& metric_catalog();
const MetricInfo& metric_info(const std::string& name);

struct RunMetrics {
    int subject = 0;
    Condition condition = Condition::Baseline;
    int road_id = 0;

    std::optional<double> speed_rmse_kmh;
    std::optional<double> lateral_rmse_m;
    std::optional<double> lateral_rmse_pct;
    std::optional<double> brake_rt_s;
    int hazards = 0;
    int brakes_missing = 0;
    std::optional<double> task_time_s;
    int tasks = 0;
    int tasks_failed = 0;
    std::optional<double> forward_pct;
    std::optional<double> console_pct;
    std::optional<double> other_pct;
    std::optional<double> fixation_ms;
    std::optional<double> eye_h_px;
    std::optional<double> eye_v_px;
    std::optional<Angles> head;  // mean per-task extrema

    std::vector<MetricRow> rows() const;
};

RunMetrics compute_run_metrics(const RunLog& log, int subject, Condition condition, int road_id);

// Fixed column order: subject,condition,road,metric,value,unit
std::string metrics_to_csv(std::span<const MetricRow> rows);

}  // namespace fingerhud
