#include <doctest.h>

#include "fingerhud/error.hpp"
#include "fingerhud/report.hpp"
#include "helpers.hpp"

using namespace fingerhud;

namespace {

std::vector<MetricRow> table(testutil::Rng& rng, int n, std::vector<int> roads, double effect) {
    std::vector<MetricRow> rows;
    const std::vector<std::string> conds{"gesture", "baseline", "tactile"};
    for (int s = 1; s <= n; ++s) {
        const double subj = testutil::normal(rng, 0, 0.1);
        for (const auto& c : conds) {
            for (int road : roads) {
                const double v = 1.0 + subj + (c == "tactile" ? effect : 0.0) + testutil::normal(rng, 0, 0.05);
                rows.push_back({s, c, road, "brake_rt", v, "s"});
            }
        }
    }
    return rows;
}

}  // namespace

TEST_SUITE("report") {
    TEST_CASE("three condition table gives omnibus and pairwise dfs") {
        testutil::Rng rng(1);
        const auto rows = table(rng, 32, {1, 2}, 0.19);
        const auto rep = build_report(rows);
        const auto* m = rep.find("brake_rt");
        REQUIRE(m);
        CHECK(m->conditions == std::vector<std::string>{"baseline", "tactile", "gesture"});
        REQUIRE(m->omnibus);
        CHECK(m->omnibus->df1 == 2);
        CHECK(m->omnibus->df2 == 62);
        CHECK(m->omnibus_significant);
        REQUIRE(m->contrasts.size() == 3);
        for (const auto& c : m->contrasts) {
            CHECK(c.anova.df1 == 1);
            CHECK(c.anova.df2 == 31);
        }
        REQUIRE(m->road_contrast);
        CHECK(m->road_contrast->anova.df2 == 31);
        CHECK(m->subjects.size() == 32);
        CHECK(m->find("tactile")->mean > m->find("baseline")->mean);
    }

    TEST_CASE("cells are per-subject means over roads") {
        const std::vector<MetricRow> rows{
            {1, "baseline", 1, "task_time", 2, "s"}, {1, "baseline", 2, "task_time", 4, "s"},
            {1, "tactile", 1, "task_time", 5, "s"},  {1, "tactile", 2, "task_time", 7, "s"},
            {2, "baseline", 1, "task_time", 1, "s"}, {2, "baseline", 2, "task_time", 1, "s"},
            {2, "tactile", 1, "task_time", 2, "s"},  {2, "tactile", 2, "task_time", 3, "s"},
        };
        const auto rep = build_report(rows);
        const auto* m = rep.find("task_time");
        REQUIRE(m);
        CHECK(m->cells == std::vector<std::vector<double>>{{3, 6}, {1, 2.5}});
        CHECK(m->find("baseline")->mean == 2.0);
        CHECK(m->find("baseline")->sd == doctest::Approx(std::sqrt(2.0)));
        REQUIRE(m->omnibus);
        CHECK(m->omnibus->df2 == 1);
    }

    TEST_CASE("unbalanced subjects are excluded with a warning") {
        testutil::Rng rng(2);
        auto rows = table(rng, 6, {1}, 0.2);
        rows.erase(std::remove_if(rows.begin(), rows.end(), [](auto& r) { return r.subject == 4 && r.condition == "gesture"; }),
                   rows.end());
        const auto rep = build_report(rows);
        const auto* m = rep.find("brake_rt");
        CHECK(m->excluded_subjects == std::vector<int>{4});
        CHECK(m->subjects.size() == 5);
        REQUIRE_FALSE(m->warnings.empty());
        CHECK(m->warnings[0].find("excluded subjects: 4") != std::string::npos);
        CHECK(m->omnibus->df2 == 8);
    }

    TEST_CASE("empty input") {
        const auto rep = build_report({});
        CHECK(rep.metrics.empty());
        REQUIRE(rep.warnings.size() == 1);
        CHECK(rep.warnings[0] == "empty metric set");
    }

    TEST_CASE("ratings give one Wilcoxon row per pair") {
        std::vector<RatingRow> r;
        for (int s = 1; s <= 32; ++s) {
            r.push_back({s, "workload", "tactile", 5.0 + s % 3});
            r.push_back({s, "workload", "gesture", 2.0 + s % 2});
        }
        const auto rep = build_report({}, {}, r);
        REQUIRE(rep.ratings.size() == 1);
        CHECK(rep.ratings[0].label == "gesture vs tactile");
        CHECK(rep.ratings[0].result.W == 0.0);
        CHECK(rep.ratings[0].result.p < 0.001);
        CHECK(rep.ratings[0].significant);

        const std::vector<RatingRow> one{{1, "ease", "tactile", 3}, {1, "ease", "gesture", 5}};
        CHECK(build_report({}, {}, one).ratings.size() == 1);
    }

    TEST_CASE("ratings csv") {
        const auto r = parse_ratings_csv("subject,item,condition,score\n1,ease,gesture,4\n2,ease,tactile,3.5\n");
        REQUIRE(r.size() == 2);
        CHECK(r[1].score == 3.5);
        try {
            parse_ratings_csv("subject,item,condition,score\n1,ease,gesture\n", "r.csv");
            FAIL("expected error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }

    TEST_CASE("formatting") {
        AnovaResult a;
        a.F = 1.6712;
        a.df1 = 2;
        a.df2 = 62;
        a.p = 0.19634;
        CHECK(format_anova(a) == "F(2,62) = 1.67, p = 0.196");
        a.p = 0.0004;
        CHECK(format_anova(a) == "F(2,62) = 1.67, p < 0.001");

        testutil::Rng rng(3);
        const auto rep = build_report(table(rng, 8, {1, 2}, 0.3));
        const auto text = report_to_text(rep);
        CHECK(text.find("Brake response time [s]") != std::string::npos);
        CHECK(text.find("F(2,14)") != std::string::npos);
        const auto j = report_to_json(rep);
        CHECK(j["schema"] == "fingerhud-report");
        CHECK(j["metrics"][0]["metric"] == "brake_rt");
        CHECK(j["metrics"][0]["omnibus"]["df2"] == 14);
        const auto csv = report_to_csv(rep);
        REQUIRE(csv.count("brake_rt"));
        CHECK(csv.at("brake_rt").rfind("subject,baseline,tactile,gesture\n", 0) == 0);
        CHECK(std::count(csv.at("brake_rt").begin(), csv.at("brake_rt").end(), '\n') == 9);
    }

    TEST_CASE("bad alpha rejected") { CHECK_THROWS_AS(build_report({}, SignificanceConfig{1.5}), ValidationError); }
}
