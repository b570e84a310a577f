#pragma once

#include "essim/clock.hpp"
#include "essim/config.hpp"
#include "essim/rng.hpp"
#include "essim/timeseries.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace essim {

struct PowerPlant {
    Technology technology = Technology::Coal;
    Fuel fuel = Fuel::None;
    double capacity_mw = 0.0;
    double efficiency = 1.0;
    double reliability = 1.0;
    double variable_om_eur_per_mwh = 0.0;
    bool flexible = false;
    int owner = -1;

    // Per-tick state.
    bool available = true;
    double marginal_cost = 0.0;
    double generation_mwh = 0.0;
    double emission_tco2 = 0.0;
};

struct EssUnit {
    BusinessModel business_model = BusinessModel::WholesaleArbitrage;
    int owner = -1;
    double power_capacity_mw = 0.0;
    double energy_capacity_mwh = 0.0;
    double roundtrip_eff = 1.0;
    double capital_cost_eur = 0.0;

    double content_mwh = 0.0;
    double marginal_cost = 0.0; // volume-weighted purchase price of the content
    double npv_eur = 0.0;       // running NPV, starts at -capital_cost_eur

    // Per-tick state.
    double purchase_cost_eur = 0.0;
    double revenue_eur = 0.0;
};

struct Load {
    LoadKind kind = LoadKind::Small;
    int owner = -1;
    double yearly_consumption_mwh = 0.0; // before demand growth
    double willingness_to_pay = 0.0;
    bool flexible = false;

    // Per-tick state.
    double hourly_need_mwh = 0.0;
    double consumption_mwh = 0.0;
};

struct AgentAccount {
    int id = -1;
    Role role = Role::Producer;
    double bank_balance_eur = 0.0;
};

// Exact (analytic) capacity per technology; plants realise it in whole units.
struct FleetTargets {
    std::array<double, technology_count> capacity_mw{};
};

struct WorldState {
    Scenario scenario;
    EnvironmentConfig env;
    Clock clock;
    std::uint64_t seed = 0;
    BaselineSeries series;

    std::vector<AgentAccount> accounts; // producers, retailers, large consumers, operator
    std::vector<PowerPlant> plants;
    std::vector<EssUnit> ess;
    std::vector<Load> loads;
    FleetTargets targets;

    double demand_factor = 1.0;
    double co2_price = 0.0;
    double fuel_price_factor = 1.0;
    std::deque<double> price_history; // most recent last
    std::vector<double> co2_price_history;
    std::optional<double> last_wind;
    std::optional<double> last_sun;

    Rng availability_rng;
    Rng outage_rng;

    int producer_id(int k) const { return k; }
    int retailer_id(int k) const { return env.n_producers + k; }
    int large_consumer_id(int k) const { return env.n_producers + env.n_retailers + k; }
    int operator_id() const { return env.n_producers + env.n_retailers + env.n_large_consumers; }
    int agent_count() const { return operator_id() + 1; }
};

// Splits a group target across technologies in whole units. Every technology
// gets floor(target/size) units; leftover units go to the largest fractional
// remainders while they bring the group total closer to its target.
std::vector<PowerPlant> realize_fleet(const FleetTargets& targets, const EnvironmentConfig& env);

// capital = P * power_capex + E * energy_capex (capex in kEUR).
double ess_capital_cost(double power_mw, double energy_mwh, double power_capex_keur_per_mw,
                        double energy_capex_keur_per_mwh);

// One storage project for each of the first round(desirability * n_producers)
// producers; the grid ESS power is shared equally among them.
std::vector<EssUnit> ess_invest(int n_producers, const Scenario& scenario);

WorldState build_world(const Scenario& scenario, const EnvironmentConfig& env, std::uint64_t seed,
                       int horizon_ticks = Clock::ticks_for_years(20));

// Applies one year of compound growth to fleets, demand, CO2 and fuel prices.
void yearly_update(WorldState& world);

double group_capacity_mw(const std::vector<PowerPlant>& plants, bool renewable);

} // namespace essim
