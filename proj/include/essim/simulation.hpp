#pragma once

#include "essim/bidding.hpp"
#include "essim/market.hpp"
#include "essim/world.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace essim {

struct TickRecord {
    int tick = 0;
    std::optional<double> price;
    double volume_mwh = 0.0;
    BalancingDirection balancing_direction = BalancingDirection::None;
    std::optional<double> balancing_price;
    double balancing_volume_mwh = 0.0;
    double imbalance_mwh = 0.0;
    bool blackout = false;
    double curtailed_mwh = 0.0;
    double unserved_mwh = 0.0;
    double co2_tco2 = 0.0; // scaled to real hours

    // Bookkeeping used by the conservation checks.
    double injection_mwh = 0.0;  // after balancing, before curtailment
    double withdrawal_mwh = 0.0; // after balancing, before load shedding
    double cash_sum_eur = 0.0;   // sum of all agents' deltas, should be 0
    double cash_gross_eur = 0.0; // sum of |delta|, scale for the above
};

struct EssLedgerEntry {
    int tick = 0;
    double charged_mwh = 0.0;
    double discharged_mwh = 0.0;
    double content_mwh = 0.0;
    double revenue_eur = 0.0;  // scaled cash
    double purchase_eur = 0.0; // scaled cash
    double fixed_om_eur = 0.0; // booked at year start
};

struct EssProjectRecord {
    double capital_cost_eur = 0.0;
    double annual_fixed_om_eur = 0.0;
    double running_npv_eur = 0.0;
    std::vector<EssLedgerEntry> ledger;
};

struct RunRecord {
    std::vector<TickRecord> ticks;
    std::vector<EssProjectRecord> projects;
    double interest_rate_pct = 0.0;
    int blackout_counter = 0;
    int no_trade_ticks = 0;
    double cumulative_emission_tco2 = 0.0;
};

struct EssFlows {
    double charged_mwh = 0.0;
    double discharged_wholesale_mwh = 0.0;
    double discharged_balancing_mwh = 0.0;
};

// Content, marginal cost and running NPV after one tick. Charging adds
// charged x efficiency to the content; discharging draws it 1:1. Cash flows
// are scaled by the hour-scale factor and discounted with the 1-based year
// index; the fixed O&M lump is booked at the first tick of every year.
EssLedgerEntry update_ess_status(EssUnit& ess, const EssFlows& flows, int tick, HourType hour,
                                 std::optional<double> wholesale_price,
                                 std::optional<double> balancing_price, double interest_rate_pct,
                                 double fixed_om_eur_per_mw_y);

struct Deviations {
    std::vector<double> plant_mwh; // realised minus scheduled, per plant
    std::vector<double> agent_mwh; // aggregated per owner
};

// Renewables deliver their schedule scaled by realised/forecast availability;
// plants with a post-clearing outage deliver nothing.
Deviations compute_imbalance_source(const RenewableFractions& forecast,
                                    const RenewableFractions& realized,
                                    std::span<const PowerPlant> plants,
                                    std::span<const double> scheduled_mwh,
                                    std::span<const char> outage, int agent_count);

// Executes one model hour on the world and appends to the record.
void run_tick(WorldState& world, int tick, RunRecord& record);

RunRecord run_simulation(WorldState& world);
RunRecord run_simulation(const Scenario& scenario, const EnvironmentConfig& env,
                         std::uint64_t seed, int horizon_ticks);

// Per-tick trace: tick,price,volume,bal_dir,bal_price,bal_vol,blackout,curtailed,co2
void write_trace_csv(std::ostream& out, const RunRecord& record);

} // namespace essim
