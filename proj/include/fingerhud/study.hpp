#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fingerhud/driver_params.hpp"
#include "fingerhud/driver_sim.hpp"
#include "fingerhud/metrics.hpp"
#include "fingerhud/runlog.hpp"
#include "fingerhud/scenario.hpp"

namespace fingerhud {

struct RunSpec {
    int subject = 0;  // 1-based
    Condition condition = Condition::Baseline;
    int road_id = 0;
    std::size_t scenario = 0;  // index into StudyPlan::scenarios
    std::uint64_t seed = 0;

    std::string file_name() const;  // e.g. "road1-tactile-s07.log"
};

struct StudyPlan {
    std::vector<Scenario> scenarios;
    std::vector<Condition> conditions;
    int n_subjects = 0;
    DriverParams params;
    std::uint64_t seed = 0;
    std::vector<RunSpec> runs;  // subject-major, then condition, then road
};

// Throws ValidationError when n_subjects < 2 or a list is empty.
StudyPlan study_plan(std::vector<Scenario> scenarios, std::vector<Condition> conditions, int n_subjects,
                     const DriverParams& params, std::uint64_t seed);

// Per-subject timing and noise scale factors; shared by all of the subject's runs.
struct SubjectFactors {
    double timing = 1.0;
    double noise = 1.0;
};
SubjectFactors subject_factors(std::uint64_t seed, int subject, double variability_sd);
DriverParams subject_params(const DriverParams& params, const SubjectFactors& factors);

RunLog simulate_planned(const StudyPlan& plan, std::size_t run_index);

struct StudyDataset {
    StudyPlan plan;
    std::vector<RunMetrics> runs;  // same order as plan.runs

    std::vector<MetricRow> metric_rows() const;
};

// Receives every log as soon as it is simulated. May be called concurrently
// from several threads with distinct run indices.
using RunSink = std::function<void(std::size_t run_index, const RunLog& log)>;

StudyDataset simulate_study(const StudyPlan& plan, const RunSink& sink = {});
StudyDataset simulate_study_serial(const StudyPlan& plan, const RunSink& sink = {});

StudyDataset simulate_study(const std::vector<int>& road_ids, int n_subjects, const DriverParams& params,
                            std::uint64_t seed);

}  // namespace fingerhud
