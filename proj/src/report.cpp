#include "fingerhud/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "fingerhud/driver_params.hpp"
#include "fingerhud/error.hpp"
#include "fingerhud/runlog.hpp"

namespace fingerhud {

const ConditionSummary* MetricReport::find(const std::string& condition) const {
    for (const auto& s : summary) {
        if (s.condition == condition) return &s;
    }
    return nullptr;
}

const MetricReport* StudyReport::find(const std::string& metric) const {
    for (const auto& m : metrics) {
        if (m.metric == metric) return &m;
    }
    return nullptr;
}

namespace {

int condition_rank(const std::string& c) {
    try {
        return static_cast<int>(condition_from_string(c));
    } catch (const Error&) {
        return 100;
    }
}

std::vector<std::string> ordered_conditions(std::set<std::string> found) {
    std::vector<std::string> out(found.begin(), found.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const std::string& a, const std::string& b) { return condition_rank(a) < condition_rank(b); });
    return out;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::optional<AnovaResult> try_anova(const std::vector<std::vector<double>>& m, std::vector<std::string>& warnings,
                                     const std::string& what) {
    try {
        return rm_anova(m);
    } catch (const Error& e) {
        warnings.push_back(what + ": " + e.what());
        return std::nullopt;
    }
}

MetricReport metric_report(const std::string& name, std::span<const MetricRow> rows, double alpha) {
    MetricReport mr;
    mr.metric = name;
    mr.unit = rows.front().unit;
    try {
        mr.title = metric_info(name).title;
    } catch (const Error&) {
        mr.title = name;
    }
    std::set<std::string> conds;
    std::set<int> roads, subjects;
    // subject -> condition -> road -> values
    std::map<int, std::map<std::string, std::map<int, std::vector<double>>>> cell;
    for (const auto& r : rows) {
        conds.insert(r.condition);
        roads.insert(r.road);
        subjects.insert(r.subject);
        cell[r.subject][r.condition][r.road].push_back(r.value);
        if (r.unit != mr.unit) mr.warnings.push_back("inconsistent unit '" + r.unit + "' for " + name);
    }
    mr.conditions = ordered_conditions(conds);
    const std::vector<int> road_list(roads.begin(), roads.end());

    std::vector<std::vector<double>> by_road;  // subject x road, averaged over conditions
    for (int s : subjects) {
        std::vector<double> row;
        std::vector<double> road_row(road_list.size(), 0.0);
        bool complete = true;
        for (const auto& c : mr.conditions) {
            double acc = 0.0;
            for (std::size_t ri = 0; ri < road_list.size(); ++ri) {
                const auto& v = cell[s][c][road_list[ri]];
                if (v.size() != 1) {
                    complete = false;
                    break;
                }
                acc += v[0];
                road_row[ri] += v[0];
            }
            if (!complete) break;
            row.push_back(acc / static_cast<double>(road_list.size()));
        }
        if (!complete) {
            mr.excluded_subjects.push_back(s);
            continue;
        }
        for (auto& x : road_row) x /= static_cast<double>(mr.conditions.size());
        mr.subjects.push_back(s);
        mr.cells.push_back(std::move(row));
        by_road.push_back(std::move(road_row));
    }
    if (!mr.excluded_subjects.empty()) {
        std::string list;
        for (int s : mr.excluded_subjects) list += (list.empty() ? "" : ", ") + std::to_string(s);
        mr.warnings.push_back("unbalanced cells; excluded subjects: " + list);
    }
    for (std::size_t j = 0; j < mr.conditions.size(); ++j) {
        std::vector<double> col;
        for (const auto& row : mr.cells) col.push_back(row[j]);
        mr.summary.push_back({mr.conditions[j], static_cast<int>(col.size()), mean(col), sample_sd(col)});
    }
    if (mr.cells.size() < 2) {
        if (mr.conditions.size() >= 2) mr.warnings.push_back("fewer than 2 complete subjects; no tests");
        return mr;
    }
    if (mr.conditions.size() >= 2) {
        mr.omnibus = try_anova(mr.cells, mr.warnings, "omnibus");
        mr.omnibus_significant = mr.omnibus && mr.omnibus->p < alpha;
        for (std::size_t a = 1; a < mr.conditions.size(); ++a) {
            for (std::size_t b = 0; b < a; ++b) {
                std::vector<std::vector<double>> m;
                for (const auto& row : mr.cells) m.push_back({row[a], row[b]});
                const auto label = mr.conditions[a] + " vs " + mr.conditions[b];
                if (auto res = try_anova(m, mr.warnings, label)) {
                    mr.contrasts.push_back({label, *res, res->p < alpha});
                }
            }
        }
    }
    if (road_list.size() >= 2) {
        std::string label;
        for (std::size_t i = 0; i < road_list.size(); ++i) {
            label += (i ? " vs road " : "road ") + std::to_string(road_list[i]);
        }
        if (auto res = try_anova(by_road, mr.warnings, label)) mr.road_contrast = Contrast{label, *res, res->p < alpha};
    }
    return mr;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string format_p(double p) {
    if (p < 0.001) return "p < 0.001";
    return "p = " + fmt("%.3f", p);
}

}  // namespace

StudyReport build_report(std::span<const MetricRow> rows, const SignificanceConfig& config,
                         std::span<const RatingRow> ratings) {
    config.validate();
    StudyReport rep;
    rep.alpha = config.alpha;
    if (rows.empty() && ratings.empty()) rep.warnings.push_back("empty metric set");

    std::vector<std::string> names;
    for (const auto& m : metric_catalog()) names.push_back(m.name);
    for (const auto& r : rows) {
        if (std::find(names.begin(), names.end(), r.metric) == names.end()) names.push_back(r.metric);
    }
    for (const auto& name : names) {
        std::vector<MetricRow> sel;
        for (const auto& r : rows) {
            if (r.metric == name) sel.push_back(r);
        }
        if (!sel.empty()) rep.metrics.push_back(metric_report(name, sel, config.alpha));
    }

    std::vector<std::string> items;
    for (const auto& r : ratings) {
        if (std::find(items.begin(), items.end(), r.item) == items.end()) items.push_back(r.item);
    }
    for (const auto& item : items) {
        std::set<std::string> conds;
        std::map<int, std::map<std::string, double>> by_subject;
        for (const auto& r : ratings) {
            if (r.item != item) continue;
            conds.insert(r.condition);
            by_subject[r.subject][r.condition] = r.score;
        }
        const auto order = ordered_conditions(conds);
        for (std::size_t a = 1; a < order.size(); ++a) {
            for (std::size_t b = 0; b < a; ++b) {
                std::vector<std::pair<double, double>> pairs;
                for (const auto& [s, m] : by_subject) {
                    const auto ia = m.find(order[a]);
                    const auto ib = m.find(order[b]);
                    if (ia != m.end() && ib != m.end()) pairs.emplace_back(ia->second, ib->second);
                }
                const auto label = order[a] + " vs " + order[b];
                try {
                    const auto w = wilcoxon_signed_rank(pairs);
                    rep.ratings.push_back({item, label, w, w.p < config.alpha});
                } catch (const Error& e) {
                    rep.warnings.push_back("rating '" + item + "' " + label + ": " + e.what());
                }
            }
        }
    }
    return rep;
}

std::vector<RatingRow> parse_ratings_csv(const std::string& text, const std::string& source) {
    std::vector<RatingRow> out;
    std::istringstream in(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (no == 1 && line.rfind("subject", 0) == 0) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 4) throw ParseError(source, no, "expected subject,item,condition,score");
        try {
            out.push_back({std::stoi(f[0]), f[1], f[2], std::stod(f[3])});
        } catch (const std::logic_error&) {
            throw ParseError(source, no, "bad number");
        }
    }
    return out;
}

std::string format_anova(const AnovaResult& a) {
    std::string f = std::isinf(a.F) ? std::string("inf") : fmt("%.2f", a.F);
    return "F(" + std::to_string(a.df1) + "," + std::to_string(a.df2) + ") = " + f + ", " + format_p(a.p);
}

std::string report_to_text(const StudyReport& rep) {
    std::ostringstream o;
    o << "Study report (alpha = " << fmt("%g", rep.alpha) << ")\n";
    for (const auto& w : rep.warnings) o << "warning: " << w << "\n";
    for (const auto& m : rep.metrics) {
        o << "\n" << m.title << " [" << m.unit << "]\n";
        for (const auto& s : m.summary) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "  %-10s n=%-3d mean = %10.4f  SD = %9.4f\n", s.condition.c_str(), s.n, s.mean,
                          s.sd);
            o << buf;
        }
        auto sig = [](bool s) { return s ? "  *" : ""; };
        if (m.omnibus) o << "  omnibus              " << format_anova(*m.omnibus) << sig(m.omnibus_significant) << "\n";
        for (const auto& c : m.contrasts) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "  %-20s ", c.label.c_str());
            o << buf << format_anova(c.anova) << sig(c.significant) << "\n";
        }
        if (m.road_contrast) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "  %-20s ", m.road_contrast->label.c_str());
            o << buf << format_anova(m.road_contrast->anova) << sig(m.road_contrast->significant) << "\n";
        }
        for (const auto& w : m.warnings) o << "  warning: " << w << "\n";
    }
    if (!rep.ratings.empty()) {
        o << "\nSubjective ratings (Wilcoxon signed-rank)\n";
        for (const auto& r : rep.ratings) {
            o << "  " << r.item << ", " << r.label << ": W = " << fmt("%.1f", r.result.W) << ", n = " << r.result.n_effective
              << ", " << format_p(r.result.p) << (r.result.method == WilcoxonMethod::Exact ? " (exact)" : " (normal)")
              << (r.significant ? "  *" : "") << "\n";
        }
    }
    o << "\n* significant at alpha\n";
    return o.str();
}

namespace {

nlohmann::json anova_json(const AnovaResult& a) {
    nlohmann::json j{{"df1", a.df1},
                     {"df2", a.df2},
                     {"p", a.p},
                     {"ss_conditions", a.ss_conditions},
                     {"ss_subjects", a.ss_subjects},
                     {"ss_error", a.ss_error},
                     {"degenerate", a.degenerate}};
    j["F"] = std::isinf(a.F) ? nlohmann::json("inf") : nlohmann::json(a.F);
    return j;
}

}  // namespace

nlohmann::json report_to_json(const StudyReport& rep) {
    nlohmann::json j;
    j["schema"] = "fingerhud-report";
    j["version"] = 1;
    j["alpha"] = rep.alpha;
    j["warnings"] = rep.warnings;
    j["metrics"] = nlohmann::json::array();
    for (const auto& m : rep.metrics) {
        nlohmann::json mj{{"metric", m.metric}, {"unit", m.unit}, {"title", m.title}, {"conditions", m.conditions}};
        mj["summary"] = nlohmann::json::array();
        for (const auto& s : m.summary) {
            mj["summary"].push_back({{"condition", s.condition}, {"n", s.n}, {"mean", s.mean}, {"sd", s.sd}});
        }
        mj["omnibus"] = m.omnibus ? anova_json(*m.omnibus) : nlohmann::json(nullptr);
        if (m.omnibus) mj["omnibus"]["significant"] = m.omnibus_significant;
        mj["contrasts"] = nlohmann::json::array();
        for (const auto& c : m.contrasts) {
            auto cj = anova_json(c.anova);
            cj["label"] = c.label;
            cj["significant"] = c.significant;
            mj["contrasts"].push_back(cj);
        }
        if (m.road_contrast) {
            auto cj = anova_json(m.road_contrast->anova);
            cj["label"] = m.road_contrast->label;
            cj["significant"] = m.road_contrast->significant;
            mj["road_contrast"] = cj;
        } else {
            mj["road_contrast"] = nullptr;
        }
        mj["excluded_subjects"] = m.excluded_subjects;
        mj["warnings"] = m.warnings;
        j["metrics"].push_back(mj);
    }
    j["ratings"] = nlohmann::json::array();
    for (const auto& r : rep.ratings) {
        j["ratings"].push_back({{"item", r.item},
                                {"label", r.label},
                                {"W", r.result.W},
                                {"w_plus", r.result.w_plus},
                                {"w_minus", r.result.w_minus},
                                {"n_effective", r.result.n_effective},
                                {"p", r.result.p},
                                {"method", r.result.method == WilcoxonMethod::Exact ? "exact" : "normal"},
                                {"significant", r.significant}});
    }
    return j;
}

std::map<std::string, std::string> report_to_csv(const StudyReport& rep) {
    std::map<std::string, std::string> out;
    for (const auto& m : rep.metrics) {
        std::string s = "subject";
        for (const auto& c : m.conditions) s += "," + c;
        s += "\n";
        for (std::size_t i = 0; i < m.cells.size(); ++i) {
            s += std::to_string(m.subjects[i]);
            for (double v : m.cells[i]) s += "," + format_number(v);
            s += "\n";
        }
        out[m.metric] = s;
    }
    return out;
}

}  // namespace fingerhud
