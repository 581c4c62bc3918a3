#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fingerhud/metrics.hpp"
#include "fingerhud/stats.hpp"

namespace fingerhud {

struct ConditionSummary {
    std::string condition;
    int n = 0;
    double mean = 0.0;
    double sd = 0.0;  // sample SD across subjects
};

struct Contrast {
    std::string label;  // "tactile vs baseline", "road 1 vs road 2"
    AnovaResult anova;
    bool significant = false;
};

struct MetricReport {
    std::string metric;
    std::string unit;
    std::string title;
    std::vector<std::string> conditions;  // column order of `cells`
    std::vector<int> subjects;            // row order of `cells`
    std::vector<std::vector<double>> cells;  // per-subject means over roads
    std::vector<ConditionSummary> summary;
    std::optional<AnovaResult> omnibus;
    bool omnibus_significant = false;
    std::vector<Contrast> contrasts;
    std::optional<Contrast> road_contrast;
    std::vector<int> excluded_subjects;
    std::vector<std::string> warnings;

    const ConditionSummary* find(const std::string& condition) const;
};

// One subjective rating. Wilcoxon rows compare conditions per item.
struct RatingRow {
    int subject = 0;
    std::string item;
    std::string condition;
    double score = 0.0;
};

struct WilcoxonRow {
    std::string item;
    std::string label;  // "gesture vs tactile"
    WilcoxonResult result;
    bool significant = false;
};

struct StudyReport {
    double alpha = 0.05;
    std::vector<MetricReport> metrics;
    std::vector<WilcoxonRow> ratings;
    std::vector<std::string> warnings;

    const MetricReport* find(const std::string& metric) const;
};

// Subjects missing a cell of a metric are listed and left out of that metric.
StudyReport build_report(std::span<const MetricRow> rows, const SignificanceConfig& config = {},
                         std::span<const RatingRow> ratings = {});

std::vector<RatingRow> parse_ratings_csv(const std::string& text, const std::string& source = "<ratings>");

// "F(2,62) = 1.67, p = 0.196"
std::string format_anova(const AnovaResult& a);
std::string report_to_text(const StudyReport& report);
nlohmann::json report_to_json(const StudyReport& report);
// One CSV per measure, keyed by metric name: subject then one column per condition.
std::map<std::string, std::string> report_to_csv(const StudyReport& report);

}  // namespace fingerhud
