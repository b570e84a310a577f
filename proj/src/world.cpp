#include "essim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace essim {

namespace {

double growth(double pct) { return 1.0 + pct / 100.0; }

void realize_group(const FleetTargets& targets, const EnvironmentConfig& env, bool renewable,
                   std::array<int, technology_count>& units) {
    struct Candidate {
        int tech;
        double fraction;
    };
    std::vector<Candidate> candidates;
    double target = 0.0;
    double built = 0.0;
    for (Technology t : all_technologies) {
        if (is_renewable(t) != renewable) continue;
        const int i = index_of(t);
        const double size = env.tech(t).unit_size_mw;
        const double want = std::max(0.0, targets.capacity_mw[i]);
        const double whole = std::floor(want / size);
        units[i] = static_cast<int>(whole);
        target += want;
        built += whole * size;
        candidates.push_back({i, want / size - whole});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.fraction > b.fraction; });
    double deficit = target - built;
    for (const auto& c : candidates) {
        const double size = env.technologies[c.tech].unit_size_mw;
        if (c.fraction > 0.0 && deficit >= 0.5 * size) {
            ++units[c.tech];
            deficit -= size;
        }
    }
}

} // namespace

std::vector<PowerPlant> realize_fleet(const FleetTargets& targets, const EnvironmentConfig& env) {
    std::array<int, technology_count> units{};
    realize_group(targets, env, false, units);
    realize_group(targets, env, true, units);

    std::vector<PowerPlant> plants;
    plants.reserve(static_cast<std::size_t>(std::accumulate(units.begin(), units.end(), 0)));
    for (Technology t : all_technologies) {
        const auto& p = env.tech(t);
        const int i = index_of(t);
        for (int u = 0; u < units[i]; ++u) {
            PowerPlant plant;
            plant.technology = t;
            plant.fuel = fuel_of(t);
            plant.capacity_mw = p.unit_size_mw;
            plant.efficiency = p.efficiency;
            plant.reliability = p.reliability;
            plant.variable_om_eur_per_mwh = p.variable_om_eur_per_mwh;
            plant.flexible = p.flexible;
            plant.owner = (i + u) % env.n_producers;
            plants.push_back(plant);
        }
    }
    return plants;
}

double group_capacity_mw(const std::vector<PowerPlant>& plants, bool renewable) {
    double total = 0.0;
    for (const auto& p : plants) {
        if (is_renewable(p.technology) == renewable) total += p.capacity_mw;
    }
    return total;
}

double ess_capital_cost(double power_mw, double energy_mwh, double power_capex_keur_per_mw,
                        double energy_capex_keur_per_mwh) {
    return power_mw * power_capex_keur_per_mw * 1000.0 +
           energy_mwh * energy_capex_keur_per_mwh * 1000.0;
}

std::vector<EssUnit> ess_invest(int n_producers, const Scenario& scenario) {
    const auto k = static_cast<int>(std::lround(scenario.ess_desirability_pct / 100.0 * n_producers));
    std::vector<EssUnit> units;
    if (k <= 0) return units;
    const double power = scenario.grid_ess_capacity_mw / k;
    const double energy = scenario.max_ess_energy_rating_mwh;
    for (int owner = 0; owner < k; ++owner) {
        EssUnit e;
        e.business_model = scenario.business_model;
        e.owner = owner;
        e.power_capacity_mw = power;
        e.energy_capacity_mwh = energy;
        e.roundtrip_eff = scenario.ess_roundtrip_eff_pct / 100.0;
        e.capital_cost_eur = ess_capital_cost(power, energy, scenario.ess_power_capex_keur_per_mw,
                                              scenario.ess_energy_capex_keur_per_mwh);
        e.npv_eur = -e.capital_cost_eur;
        units.push_back(e);
    }
    return units;
}

WorldState build_world(const Scenario& scenario, const EnvironmentConfig& env, std::uint64_t seed,
                       int horizon_ticks) {
    scenario.validate();
    env.validate();
    if (horizon_ticks <= 0) throw ConfigError("horizon_ticks", "must be > 0");

    WorldState w;
    w.scenario = scenario;
    w.env = env;
    w.clock.horizon_ticks = horizon_ticks;
    w.seed = seed;
    w.series = load_baseline(env, horizon_ticks);
    w.co2_price = env.co2_price_initial;
    w.availability_rng = Rng(stream_seed(seed, Stream::Availability));
    w.outage_rng = Rng(stream_seed(seed, Stream::Outage));

    for (int k = 0; k < env.n_producers; ++k) w.accounts.push_back({w.producer_id(k), Role::Producer});
    for (int k = 0; k < env.n_retailers; ++k) w.accounts.push_back({w.retailer_id(k), Role::Retailer});
    for (int k = 0; k < env.n_large_consumers; ++k) {
        w.accounts.push_back({w.large_consumer_id(k), Role::LargeConsumer});
    }
    w.accounts.push_back({w.operator_id(), Role::MarketOperator});

    const double total_mw = env.total_generation_capacity_gw * 1000.0;
    const double res_mw = total_mw * env.initial_res_share_pct / 100.0;
    const double non_res_mw = total_mw - res_mw;
    for (Technology t : all_technologies) {
        const double group = is_renewable(t) ? res_mw : non_res_mw;
        w.targets.capacity_mw[index_of(t)] = group * env.tech(t).share_pct / 100.0;
    }
    w.plants = realize_fleet(w.targets, env);

    const double total_mwh = env.total_annual_load_gwh * 1000.0;
    const double large_mwh = total_mwh * env.large_load_share_pct / 100.0;
    const double small_mwh = total_mwh - large_mwh;
    for (int k = 0; k < env.n_retailers; ++k) {
        Load l;
        l.kind = LoadKind::Small;
        l.owner = w.retailer_id(k);
        l.yearly_consumption_mwh = small_mwh / env.n_retailers;
        l.willingness_to_pay = env.small_consumer_wtp;
        w.loads.push_back(l);
    }
    const auto n_flexible = std::lround(env.flexible_load_pct / 100.0 * env.n_large_consumers);
    for (int k = 0; k < env.n_large_consumers; ++k) {
        Load l;
        l.kind = LoadKind::Large;
        l.owner = w.large_consumer_id(k);
        l.yearly_consumption_mwh = large_mwh / env.n_large_consumers;
        const double span = env.large_consumer_wtp_max - env.large_consumer_wtp_min;
        l.willingness_to_pay =
            env.n_large_consumers == 1
                ? env.large_consumer_wtp_min + 0.5 * span
                : env.large_consumer_wtp_min + span * k / (env.n_large_consumers - 1);
        l.flexible = k < n_flexible;
        w.loads.push_back(l);
    }

    w.ess = ess_invest(env.n_producers, scenario);
    return w;
}

void yearly_update(WorldState& w) {
    const auto& s = w.scenario;
    for (Technology t : all_technologies) {
        const double g = growth(is_renewable(t) ? s.res_growth_pct_per_y : s.nonres_growth_pct_per_y);
        double& c = w.targets.capacity_mw[index_of(t)];
        c = std::max(0.0, c * g);
    }
    w.plants = realize_fleet(w.targets, w.env);
    w.demand_factor *= growth(s.demand_growth_pct_per_y);
    w.co2_price *= growth(s.co2_price_growth_pct_per_y);
    w.fuel_price_factor *= growth(w.env.fuel_price_growth_pct_per_y);
}

} // namespace essim
