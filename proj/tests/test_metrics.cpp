#include "doctest.h"

#include "essim/metrics.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace essim;

namespace {

ScenarioMetrics scenario(std::int64_t id, std::optional<double> npv, double price, double blackout,
                         double emission) {
    ScenarioMetrics s;
    s.scenario_id = id;
    s.npv_eur = npv;
    s.price_eur_per_mwh = price;
    s.blackout_hours = blackout;
    s.emission_tco2 = emission;
    return s;
}

RunMetrics run(std::int64_t id, std::optional<double> npv) {
    RunMetrics r;
    r.scenario_id = id;
    r.run_npv_eur = npv;
    r.run_price_eur_per_mwh = 40.0;
    return r;
}

} // namespace

TEST_CASE("project NPV") {
    CHECK(project_npv({}, 1000.0, 0.0, 5.0, 288) == -1000.0);

    std::vector<EssLedgerEntry> one(1);
    one[0].tick = 10;
    one[0].revenue_eur = 105.0;
    CHECK(project_npv(one, 0.0, 0.0, 5.0, 288) == doctest::Approx(100.0));

    SUBCASE("fixed O&M spread over the year equals a yearly lump") {
        CHECK(project_npv({}, 0.0, 288.0, 5.0, 576) == doctest::Approx(-288.0 / 1.05 - 288.0 / 1.1025));
    }
    SUBCASE("entries outside the horizon are rejected") {
        one[0].tick = 300;
        CHECK_THROWS_AS(project_npv(one, 0.0, 0.0, 5.0, 288), std::out_of_range);
    }
}

TEST_CASE("project NPV agrees with per-tick discounting on random ledgers") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const int horizon = Clock::ticks_for_years(1 + static_cast<int>(rng.uniform() * 20));
        std::vector<EssLedgerEntry> ledger;
        for (int t = 0; t < horizon; ++t) {
            if (!rng.bernoulli(0.3)) continue;
            EssLedgerEntry e;
            e.tick = t;
            e.revenue_eur = 1e5 * rng.uniform();
            e.purchase_eur = 1e5 * rng.uniform();
            ledger.push_back(e);
        }
        const double capital = 1e7 * rng.uniform();
        const double om = 1e5 * rng.uniform();
        const double rate = 15.0 * rng.uniform();
        const double got = project_npv(ledger, capital, om, rate, horizon);
        const double want = oracle::discounted_ledger(ledger, capital, om, rate, horizon);
        CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("scenario aggregation") {
    SUBCASE("mixed signs") {
        const std::vector<RunMetrics> runs{run(1, 1.0), run(1, -1.0)};
        const auto s = scenario_aggregate(runs);
        CHECK(*s.npv_eur == 0.0);
        CHECK_FALSE(s.absolute_profitability);
    }
    SUBCASE("all positive") {
        const std::vector<RunMetrics> runs(3, run(2, 5.0));
        const auto s = scenario_aggregate(runs);
        CHECK(*s.npv_eur == 5.0);
        CHECK(s.absolute_profitability);
    }
    SUBCASE("twenty replications") {
        Rng rng(1);
        std::vector<RunMetrics> runs;
        double sum = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double v = 200.0 * rng.uniform() - 100.0;
            sum += v;
            runs.push_back(run(3, v));
        }
        CHECK(*scenario_aggregate(runs).npv_eur == doctest::Approx(sum / 20.0));
    }
    SUBCASE("no storage") {
        const std::vector<RunMetrics> runs{run(4, std::nullopt)};
        const auto s = scenario_aggregate(runs);
        CHECK_FALSE(s.npv_eur);
        CHECK_FALSE(s.absolute_profitability);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(scenario_aggregate({}), std::invalid_argument);
        const std::vector<RunMetrics> mixed{run(1, 1.0), run(2, 1.0)};
        CHECK_THROWS_AS(scenario_aggregate(mixed), std::invalid_argument);
    }
}

TEST_CASE("normalization") {
    const std::vector<ScenarioMetrics> set{scenario(0, -100.0, 40.0, 0.0, 10.0),
                                           scenario(1, 100.0, 60.0, 5.0, 30.0),
                                           scenario(2, std::nullopt, 50.0, 10.0, 20.0)};
    const auto n = normalize_scores(set);
    CHECK(*n.scores[0].profitability == 0.0);
    CHECK(*n.scores[1].profitability == 100.0);
    CHECK_FALSE(n.scores[2].profitability);
    CHECK(n.scores[0].affordability == 100.0);
    CHECK(n.scores[1].affordability == 0.0);
    CHECK(n.scores[1].acceptability == 0.0);
    CHECK(n.scores[2].availability == 0.0);
    CHECK(n.scores[2].acceptability == 50.0);
    for (const auto& g : n.scores) {
        CHECK(g.government_goal ==
              doctest::Approx((g.affordability + g.acceptability + g.availability) / 3.0));
    }

    SUBCASE("degenerate criterion scores 50") {
        const std::vector<ScenarioMetrics> flat{scenario(0, 1.0, 40.0, 0.0, 10.0),
                                                scenario(1, 2.0, 40.0, 0.0, 20.0)};
        const auto f = normalize_scores(flat);
        CHECK(f.affordability_degenerate);
        CHECK(f.availability_degenerate);
        CHECK_FALSE(f.acceptability_degenerate);
        CHECK(f.scores[0].affordability == 50.0);
    }
}

TEST_CASE("government goal is the mean of its three scores") {
    // Scores 30, 60, 90 arranged through a three-scenario set.
    const std::vector<ScenarioMetrics> set{scenario(0, 0.0, 0.0, 0.0, 0.0),
                                           scenario(1, 0.0, 100.0, 100.0, 100.0),
                                           scenario(2, 0.0, 70.0, 40.0, 10.0)};
    const auto n = normalize_scores(set);
    CHECK(n.scores[2].affordability == doctest::Approx(30.0));
    CHECK(n.scores[2].availability == doctest::Approx(60.0));
    CHECK(n.scores[2].acceptability == doctest::Approx(90.0));
    CHECK(n.scores[2].government_goal == doctest::Approx(60.0));
}

TEST_CASE("normalization properties on random scenario sets") {
    Rng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const int count = 2 + static_cast<int>(rng.uniform() * 30);
        std::vector<ScenarioMetrics> set;
        for (int i = 0; i < count; ++i) {
            std::optional<double> npv;
            if (rng.bernoulli(0.8)) npv = 2e6 * rng.uniform() - 1.5e6;
            set.push_back(scenario(i, npv, 30 + 40 * rng.uniform(), std::floor(rng.uniform() * 5),
                                   1e6 * rng.uniform()));
        }
        const auto n = normalize_scores(set);
        for (const auto& g : n.scores) {
            if (g.profitability) {
                CHECK(*g.profitability >= 0.0);
                CHECK(*g.profitability <= 100.0);
            }
            for (double v : {g.affordability, g.acceptability, g.availability, g.government_goal}) {
                CHECK(v >= 0.0);
                CHECK(v <= 100.0);
            }
        }

        // A positive rescaling of NPV keeps profitability ordering and flags.
        auto scaled = set;
        for (auto& s : scaled) {
            if (s.npv_eur) *s.npv_eur *= 3.7;
        }
        const auto m = normalize_scores(scaled);
        for (int i = 0; i < count; ++i) {
            for (int j = 0; j < count; ++j) {
                const auto& a = n.scores[static_cast<std::size_t>(i)].profitability;
                const auto& b = n.scores[static_cast<std::size_t>(j)].profitability;
                const auto& a2 = m.scores[static_cast<std::size_t>(i)].profitability;
                const auto& b2 = m.scores[static_cast<std::size_t>(j)].profitability;
                if (a && b) CHECK((*a < *b) == (*a2 < *b2));
            }
        }
    }
}

TEST_CASE("profitability threshold") {
    auto with = [](std::vector<double> npvs) {
        std::vector<ScenarioMetrics> set;
        for (double v : npvs) set.push_back(scenario(0, v, 40, 0, 0));
        return profitability_threshold(set);
    };
    CHECK(with({-100, 100}).value == 50.0);
    CHECK(with({-300, 100}).value == 75.0);
    CHECK_FALSE(with({-300, 100}).clamped);
    const auto all_negative = with({-300, -100});
    CHECK(all_negative.value == 100.0);
    CHECK(all_negative.clamped);
    CHECK(with({100, 300}).value == 0.0);
}
