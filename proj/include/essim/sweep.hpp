#pragma once

#include "essim/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace essim {

class JournalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Values of each experiment axis, in the order the axes are enumerated.
struct ScenarioGrid {
    std::vector<BusinessModel> business_model{BusinessModel::WholesaleArbitrage,
                                              BusinessModel::ReserveCapacity};
    std::vector<double> ess_desirability_pct{0, 50, 100};
    std::vector<double> grid_ess_capacity_mw{10, 1000};
    std::vector<double> max_ess_energy_rating_mwh{10, 1000};
    std::vector<double> ess_power_capex_keur_per_mw{1, 100};
    std::vector<double> ess_energy_capex_keur_per_mwh{1, 100};
    std::vector<double> ess_roundtrip_eff_pct{70, 85, 100};
    std::vector<double> res_growth_pct_per_y{0, 25};
    std::vector<double> nonres_growth_pct_per_y{-10, 0, 10};
    std::vector<double> co2_price_growth_pct_per_y{0, 10};
    std::vector<double> demand_growth_pct_per_y{0, 2, 4};

    std::size_t size() const;
    void validate() const;

    // Full grid with the middle value of every three-valued axis removed.
    static ScenarioGrid desk();
};

struct SweepSpec {
    ScenarioGrid grid;
    int replications = 20;
    int horizon_years = 20;
    std::uint64_t base_seed = 42;
    int worker_count = 1;

    void validate() const;
    std::size_t experiment_count() const { return grid.size() * static_cast<std::size_t>(replications); }

    static SweepSpec desk();
};

void to_json(nlohmann::json& j, const ScenarioGrid& g);
void from_json(const nlohmann::json& j, ScenarioGrid& g);
void to_json(nlohmann::json& j, const SweepSpec& s);
void from_json(const nlohmann::json& j, SweepSpec& s);

// Lexicographic full factorial, first axis slowest. Index = scenario id.
std::vector<Scenario> enumerate_scenarios(const ScenarioGrid& grid);

using RunFunction = std::function<RunMetrics(const Scenario&, const EnvironmentConfig&,
                                             std::uint64_t seed, int horizon_ticks,
                                             std::int64_t scenario_id, int rep)>;

// Simulates one run and reduces it to its metrics.
RunMetrics simulate_run(const Scenario& scenario, const EnvironmentConfig& env,
                        std::uint64_t seed, int horizon_ticks, std::int64_t scenario_id, int rep);

struct SweepProgress {
    std::size_t done = 0;
    std::size_t total = 0;
};

struct SweepOptions {
    std::optional<std::filesystem::path> journal; // append-only completed-pairs log
    bool resume = false;
    int max_attempts = 3;                          // per pair
    std::optional<std::size_t> stop_after;         // stop once this many pairs are journaled
    std::function<void(const SweepProgress&)> on_progress;
    RunFunction run = simulate_run;
};

struct SweepResults {
    std::vector<Scenario> scenarios;
    std::vector<RunMetrics> runs; // ordered by (scenario id, rep)
    std::vector<ScenarioMetrics> scenario_metrics;
    Normalization normalization;
    Threshold threshold;
    std::size_t executed = 0; // pairs run by this call (excludes journal replay)
    bool complete = false;
};

// Stable identity of a sweep for journal resumption.
std::uint64_t sweep_fingerprint(const SweepSpec& spec, const EnvironmentConfig& env);

SweepResults run_sweep(const SweepSpec& spec, const EnvironmentConfig& env,
                       const SweepOptions& options = {});

// Writes scenarios.csv, runs.csv and scores.csv into `dir`.
void write_sweep_csvs(const SweepResults& results, const std::filesystem::path& dir);

} // namespace essim
