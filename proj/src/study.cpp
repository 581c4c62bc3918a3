#include "fingerhud/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>

#include "fingerhud/error.hpp"
#include "fingerhud/rng.hpp"

namespace fingerhud {

std::string RunSpec::file_name() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "road%d-%s-s%02d.log", road_id, std::string(to_string(condition)).c_str(), subject);
    return buf;
}

StudyPlan study_plan(std::vector<Scenario> scenarios, std::vector<Condition> conditions, int n_subjects,
                     const DriverParams& params, std::uint64_t seed) {
    if (n_subjects < 2) {
        throw ValidationError("need at least 2 subjects for the statistics, got " + std::to_string(n_subjects));
    }
    if (scenarios.empty()) throw ValidationError("no roads selected");
    if (conditions.empty()) throw ValidationError("no conditions selected");
    params.validate();
    StudyPlan plan;
    plan.scenarios = std::move(scenarios);
    plan.conditions = std::move(conditions);
    plan.n_subjects = n_subjects;
    plan.params = params;
    plan.seed = seed;
    for (int s = 1; s <= n_subjects; ++s) {
        for (auto c : plan.conditions) {
            for (std::size_t i = 0; i < plan.scenarios.size(); ++i) {
                const int road = plan.scenarios[i].road.id;
                RunSpec r{s, c, road, i,
                          derive_seed(seed, {static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(c) + 1,
                                             static_cast<std::uint64_t>(road)})};
                plan.runs.push_back(r);
            }
        }
    }
    return plan;
}

SubjectFactors subject_factors(std::uint64_t seed, int subject, double sd) {
    Rng rng(derive_seed(seed, {0xF00D, static_cast<std::uint64_t>(subject)}));
    std::normal_distribution<double> z(0.0, 1.0);
    const double a = z(rng);
    const double b = z(rng);
    return {std::clamp(1.0 + sd * a, 0.5, 1.5), std::clamp(1.0 + sd * b, 0.5, 1.5)};
}

DriverParams subject_params(const DriverParams& params, const SubjectFactors& f) {
    DriverParams p = scale_timings(params, f.timing);
    for (auto c : kAllConditions) {
        auto& cp = p.of(c);
        cp.speed_noise.sigma *= f.noise;
        cp.lateral_noise.sigma *= f.noise;
    }
    return p;
}

RunLog simulate_planned(const StudyPlan& plan, std::size_t i) {
    const auto& r = plan.runs.at(i);
    const auto p = subject_params(plan.params, subject_factors(plan.seed, r.subject, plan.params.subject_variability_sd));
    SimOverrides ov;
    ov.subject = r.subject;
    return simulate_run(plan.scenarios[r.scenario], r.condition, p, r.seed, ov);
}

namespace {

RunMetrics one_run(const StudyPlan& plan, std::size_t i, const RunSink& sink) {
    const auto log = simulate_planned(plan, i);
    if (sink) sink(i, log);
    const auto& r = plan.runs[i];
    return compute_run_metrics(log, r.subject, r.condition, r.road_id);
}

}  // namespace

StudyDataset simulate_study_serial(const StudyPlan& plan, const RunSink& sink) {
    StudyDataset ds;
    ds.plan = plan;
    ds.runs.reserve(plan.runs.size());
    for (std::size_t i = 0; i < plan.runs.size(); ++i) ds.runs.push_back(one_run(plan, i, sink));
    return ds;
}

StudyDataset simulate_study(const StudyPlan& plan, const RunSink& sink) {
    StudyDataset ds;
    ds.plan = plan;
    ds.runs.resize(plan.runs.size());
    const long n = static_cast<long>(plan.runs.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        try {
            ds.runs[static_cast<std::size_t>(i)] = one_run(plan, static_cast<std::size_t>(i), sink);
        } catch (...) {
#pragma omp critical(fingerhud_study_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return ds;
}

StudyDataset simulate_study(const std::vector<int>& road_ids, int n_subjects, const DriverParams& params,
                            std::uint64_t seed) {
    std::vector<Scenario> sc;
    for (int id : road_ids) sc.push_back(builtin_scenario(id));
    const std::vector<Condition> all(std::begin(kAllConditions), std::end(kAllConditions));
    return simulate_study(study_plan(std::move(sc), all, n_subjects, params, seed));
}

std::vector<MetricRow> StudyDataset::metric_rows() const {
    std::vector<MetricRow> out;
    for (const auto& r : runs) {
        const auto rows = r.rows();
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

}  // namespace fingerhud
