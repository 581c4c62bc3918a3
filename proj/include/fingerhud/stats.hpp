#pragma once

#include <span>
#include <utility>
#include <vector>

namespace fingerhud {

struct SignificanceConfig {
    double alpha = 0.05;

    void validate() const;
};

struct AnovaResult {
    double F = 0.0;
    int df1 = 0;
    int df2 = 0;
    double p = 1.0;
    double ss_conditions = 0.0;
    double ss_subjects = 0.0;
    double ss_error = 0.0;
    double ss_total = 0.0;
    // Error mean square is zero while the conditions differ: F is infinite, p = 0.
    bool degenerate = false;
};

// Rows are subjects, columns conditions. One-way within-subjects model with
// sphericity assumed. Throws ValidationError for ragged or non-finite input
// and DataError when both mean squares are zero.
AnovaResult rm_anova(const std::vector<std::vector<double>>& data);

// Regularized incomplete beta I_x(a, b).
double betai(double a, double b, double x);

// P(F > f) for an F(d1, d2) variable.
double f_upper_tail(double f, double d1, double d2);

enum class WilcoxonMethod { Exact, NormalApprox };

struct WilcoxonResult {
    double W = 0.0;  // min(W+, W-)
    double w_plus = 0.0;
    double w_minus = 0.0;
    int n_effective = 0;
    double p = 1.0;  // two-sided
    WilcoxonMethod method = WilcoxonMethod::Exact;
};

// Pairs are (a, b) with difference a - b. Zero differences are dropped and
// tied magnitudes get average ranks. Exact p for n_eff <= exact_max_n, else
// the normal approximation with tie-corrected variance and continuity
// correction. Throws DataError when every difference is zero.
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, int exact_max_n = 25);

// Average ranks (1-based) of the values, ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace fingerhud
