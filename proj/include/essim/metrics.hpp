#pragma once

#include "essim/simulation.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace essim {

struct RunMetrics {
    std::int64_t scenario_id = 0;
    int rep = 0;
    std::uint64_t seed = 0;
    std::optional<double> run_npv_eur; // mean over projects; empty without ESS
    std::optional<double> run_price_eur_per_mwh;
    double run_blackout_hours = 0.0;
    double run_emission_tco2 = 0.0;
    int no_trade_ticks = 0;
};

struct ScenarioMetrics {
    std::int64_t scenario_id = 0;
    int runs = 0;
    std::optional<double> npv_eur;
    std::optional<double> price_eur_per_mwh;
    double blackout_hours = 0.0;
    double emission_tco2 = 0.0;
    double no_trade_ticks = 0.0;
    bool absolute_profitability = false;
};

struct GoalScores {
    std::optional<double> profitability; // empty for scenarios without ESS
    double affordability = 0.0;
    double acceptability = 0.0;
    double availability = 0.0;
    double government_goal = 0.0;
};

struct GoalWeights {
    double affordability = 1.0 / 3.0;
    double acceptability = 1.0 / 3.0;
    double availability = 1.0 / 3.0;
};

struct Normalization {
    std::vector<GoalScores> scores; // parallel to the input scenarios
    // Criteria whose observed values were all equal; their scores are 50.
    bool profitability_degenerate = false;
    bool affordability_degenerate = false;
    bool acceptability_degenerate = false;
    bool availability_degenerate = false;
};

struct Threshold {
    double value = 0.0;
    bool clamped = false;
};

// -capital + sum_t (revenue - purchase - annual_om/288) / (1+i/100)^(floor(t/288)+1)
// over 0-based ticks of the ledger, flows already in scaled cash.
double project_npv(std::span<const EssLedgerEntry> ledger, double capital_cost_eur,
                   double annual_fixed_om_eur, double interest_rate_pct, int horizon_ticks);

RunMetrics run_metrics(const RunRecord& record, std::int64_t scenario_id, int rep,
                       std::uint64_t seed);

// Throws std::invalid_argument on an empty set or mixed scenario ids.
ScenarioMetrics scenario_aggregate(std::span<const RunMetrics> runs);

// Min-max scores: profitability rises with NPV; affordability, availability
// and acceptability fall with price, blackouts and emission. Scenarios
// without ESS are left out of the profitability pool.
Normalization normalize_scores(std::span<const ScenarioMetrics> scenarios,
                               const GoalWeights& weights = {});

// Profitability score at which the scenario NPV is zero.
Threshold profitability_threshold(std::span<const ScenarioMetrics> scenarios);

} // namespace essim
