#include "fingerhud/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "fingerhud/error.hpp"

namespace fingerhud {

void SignificanceConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must be in (0, 1)");
}

AnovaResult rm_anova(const std::vector<std::vector<double>>& data) {
    const std::size_t n = data.size();
    if (n < 2) throw ValidationError("repeated-measures ANOVA needs at least 2 subjects");
    const std::size_t k = data[0].size();
    if (k < 2) throw ValidationError("repeated-measures ANOVA needs at least 2 conditions");
    for (std::size_t i = 0; i < n; ++i) {
        if (data[i].size() != k) {
            throw ValidationError("missing cells: subject row " + std::to_string(i + 1) + " has " +
                                  std::to_string(data[i].size()) + " of " + std::to_string(k) + " conditions");
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (!std::isfinite(data[i][j])) {
                throw ValidationError("missing cell at subject row " + std::to_string(i + 1) + ", condition " +
                                      std::to_string(j + 1));
            }
        }
    }
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    double grand = 0.0;
    std::vector<double> col(k, 0.0), row(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            grand += data[i][j];
            col[j] += data[i][j];
            row[i] += data[i][j];
        }
    }
    grand /= nd * kd;
    for (auto& c : col) c /= nd;
    for (auto& r : row) r /= kd;

    AnovaResult res;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double d = data[i][j] - grand;
            res.ss_total += d * d;
            const double e = data[i][j] - col[j] - row[i] + grand;
            res.ss_error += e * e;
        }
    }
    for (double c : col) res.ss_conditions += nd * (c - grand) * (c - grand);
    for (double r : row) res.ss_subjects += kd * (r - grand) * (r - grand);

    res.df1 = static_cast<int>(k - 1);
    res.df2 = static_cast<int>((k - 1) * (n - 1));
    const double ms_cond = res.ss_conditions / res.df1;
    const double ms_err = res.ss_error / res.df2;
    const double scale = std::max(res.ss_total, std::numeric_limits<double>::min());
    const bool err_zero = res.ss_error <= 1e-13 * scale;
    const bool cond_zero = res.ss_conditions <= 1e-13 * scale;
    if (err_zero && cond_zero) {
        throw DataError("degenerate data: both condition and error mean squares are zero");
    }
    if (err_zero) {
        res.F = std::numeric_limits<double>::infinity();
        res.p = 0.0;
        res.degenerate = true;
        return res;
    }
    res.F = cond_zero ? 0.0 : ms_cond / ms_err;
    res.p = f_upper_tail(res.F, res.df1, res.df2);
    return res;
}

namespace {

// Continued fraction for the incomplete beta, modified Lentz.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    return h;
}

}  // namespace

double betai(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw ValidationError("betai needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double f_upper_tail(double f, double d1, double d2) {
    if (!(d1 > 0.0 && d2 > 0.0)) throw ValidationError("F distribution needs positive degrees of freedom");
    if (std::isnan(f)) throw ValidationError("F statistic is NaN");
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    return betai(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t m = i; m <= j; ++m) ranks[idx[m]] = r;
        i = j + 1;
    }
    return ranks;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, int exact_max_n) {
    std::vector<double> diffs;
    for (const auto& [a, b] : pairs) {
        if (!std::isfinite(a) || !std::isfinite(b)) throw ValidationError("non-finite value in Wilcoxon pairs");
        const double d = a - b;
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.empty()) throw DataError("degenerate data: every paired difference is zero");
    std::vector<double> mags(diffs.size());
    std::transform(diffs.begin(), diffs.end(), mags.begin(), [](double d) { return std::abs(d); });
    const auto ranks = average_ranks(mags);

    WilcoxonResult res;
    res.n_effective = static_cast<int>(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) (diffs[i] > 0 ? res.w_plus : res.w_minus) += ranks[i];
    res.W = std::min(res.w_plus, res.w_minus);
    const int n = res.n_effective;

    if (n <= exact_max_n) {
        // Doubled ranks are integers even with ties; count sign patterns by subset sum.
        std::vector<int> r2(ranks.size());
        std::transform(ranks.begin(), ranks.end(), r2.begin(), [](double r) { return static_cast<int>(std::lround(2 * r)); });
        const int total = std::accumulate(r2.begin(), r2.end(), 0);
        std::vector<std::uint64_t> ways(static_cast<std::size_t>(total) + 1, 0);
        ways[0] = 1;
        int reach = 0;
        for (int r : r2) {
            for (int s = reach; s >= 0; --s) ways[static_cast<std::size_t>(s + r)] += ways[static_cast<std::size_t>(s)];
            reach += r;
        }
        const int w2 = static_cast<int>(std::lround(2 * res.W));
        // P(min(S, total - S) <= W) = P(S <= W) + P(S >= total - W), overlap counted once.
        std::uint64_t hits = 0;
        for (int s = 0; s <= total; ++s) {
            if (s <= w2 || s >= total - w2) hits += ways[static_cast<std::size_t>(s)];
        }
        res.p = std::min(1.0, std::ldexp(static_cast<double>(hits), -n));
        res.method = WilcoxonMethod::Exact;
        return res;
    }

    const double nd = n;
    const double mean = nd * (nd + 1) / 4.0;
    double tie = 0.0;
    {
        std::vector<double> sorted = mags;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie += t * t * t - t;
            i = j + 1;
        }
    }
    const double var = nd * (nd + 1) * (2 * nd + 1) / 24.0 - tie / 48.0;
    if (var <= 0.0) throw DataError("degenerate data: zero variance in Wilcoxon statistic");
    const double z = std::min(0.0, (res.W - mean + 0.5) / std::sqrt(var));
    res.p = std::min(1.0, std::erfc(-z / std::sqrt(2.0)));
    res.method = WilcoxonMethod::NormalApprox;
    return res;
}

}  // namespace fingerhud
