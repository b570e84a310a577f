#include "essim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

namespace essim {

namespace {

constexpr double content_eps = 1e-12;
// Imbalances below this are summation noise and are not balanced.
constexpr double imbalance_eps = 1e-6;

double discount(double interest_rate_pct, int year) {
    return std::pow(1.0 + interest_rate_pct / 100.0, year);
}

std::string_view direction_name(BalancingDirection d) {
    switch (d) {
    case BalancingDirection::Upward: return "up";
    case BalancingDirection::Downward: return "down";
    default: return "none";
    }
}

std::string optional_number(const std::optional<double>& v) {
    return v ? fmt::format("{:.10g}", *v) : std::string("NA");
}

double fuel_price(const WorldState& w, Fuel f, int tick) {
    switch (f) {
    case Fuel::Coal: return w.series.coal_price.at(tick) * w.fuel_price_factor;
    case Fuel::NaturalGas: return w.series.gas_price.at(tick) * w.fuel_price_factor;
    case Fuel::Uranium: return w.series.uranium_price.at(tick) * w.fuel_price_factor;
    default: return 0.0;
    }
}

// Removes `amount` of excess from production: renewables first (pro rata),
// then thermal plants from the cheapest.
void curtail(std::vector<PowerPlant>& plants, std::vector<double>& production, double amount) {
    double res_total = 0.0;
    for (std::size_t i = 0; i < plants.size(); ++i) {
        if (is_renewable(plants[i].technology)) res_total += production[i];
    }
    if (res_total > 0.0) {
        const double cut = std::min(amount, res_total);
        const double keep = 1.0 - cut / res_total;
        for (std::size_t i = 0; i < plants.size(); ++i) {
            if (is_renewable(plants[i].technology)) production[i] *= keep;
        }
        amount -= cut;
    }
    if (amount <= 0.0) return;
    std::vector<std::size_t> thermal;
    for (std::size_t i = 0; i < plants.size(); ++i) {
        if (!is_renewable(plants[i].technology) && production[i] > 0.0) thermal.push_back(i);
    }
    std::stable_sort(thermal.begin(), thermal.end(), [&](std::size_t a, std::size_t b) {
        return plants[a].marginal_cost < plants[b].marginal_cost;
    });
    for (std::size_t i : thermal) {
        if (amount <= 0.0) break;
        const double cut = std::min(amount, production[i]);
        production[i] -= cut;
        amount -= cut;
    }
}

} // namespace

EssLedgerEntry update_ess_status(EssUnit& ess, const EssFlows& flows, int tick, HourType hour,
                                 std::optional<double> wholesale_price,
                                 std::optional<double> balancing_price, double interest_rate_pct,
                                 double fixed_om_eur_per_mw_y) {
    EssLedgerEntry e;
    e.tick = tick;
    const double df = discount(interest_rate_pct, Clock::year(tick));
    const double k = Clock::hour_scale_factor;
    const double wp = wholesale_price.value_or(0.0);
    const double bp = balancing_price.value_or(0.0);

    ess.purchase_cost_eur = 0.0;
    ess.revenue_eur = 0.0;

    if (flows.charged_mwh > 0.0) {
        const double before = ess.content_mwh;
        const double after = before + flows.charged_mwh * ess.roundtrip_eff;
        ess.marginal_cost = (before * ess.marginal_cost + flows.charged_mwh * wp) / after;
        ess.content_mwh = std::min(after, ess.energy_capacity_mwh);
        ess.purchase_cost_eur = flows.charged_mwh * wp;
        e.charged_mwh = flows.charged_mwh;
    }

    double revenue = 0.0;
    if (ess.business_model == BusinessModel::WholesaleArbitrage) {
        if (hour == HourType::Peak) revenue = flows.discharged_wholesale_mwh * wp;
    } else {
        revenue = flows.discharged_balancing_mwh * bp;
    }
    const double discharged = flows.discharged_wholesale_mwh + flows.discharged_balancing_mwh;
    if (discharged > 0.0) {
        ess.content_mwh -= discharged;
        if (ess.content_mwh <= content_eps) ess.content_mwh = 0.0;
        e.discharged_mwh = discharged;
    }
    if (ess.content_mwh == 0.0) ess.marginal_cost = 0.0;
    ess.revenue_eur = revenue;

    e.purchase_eur = k * ess.purchase_cost_eur;
    e.revenue_eur = k * revenue;
    ess.npv_eur += (e.revenue_eur - e.purchase_eur) / df;

    if (Clock::is_year_start(tick)) {
        e.fixed_om_eur = fixed_om_eur_per_mw_y * ess.power_capacity_mw;
        ess.npv_eur -= e.fixed_om_eur / df;
    }
    e.content_mwh = ess.content_mwh;
    return e;
}

Deviations compute_imbalance_source(const RenewableFractions& forecast,
                                    const RenewableFractions& realized,
                                    std::span<const PowerPlant> plants,
                                    std::span<const double> scheduled_mwh,
                                    std::span<const char> outage, int agent_count) {
    Deviations d;
    d.plant_mwh.assign(plants.size(), 0.0);
    d.agent_mwh.assign(static_cast<std::size_t>(agent_count), 0.0);
    for (std::size_t i = 0; i < plants.size(); ++i) {
        const auto& p = plants[i];
        const double sched = scheduled_mwh[i];
        if (!(sched > 0.0)) continue;
        double dev = 0.0;
        if (!outage.empty() && outage[i]) {
            dev = -sched;
        } else if (is_renewable(p.technology)) {
            const double f = forecast.of(p.technology);
            if (f > 0.0) dev = sched * (realized.of(p.technology) / f) - sched;
        }
        d.plant_mwh[i] = dev;
        if (p.owner >= 0 && p.owner < agent_count) d.agent_mwh[static_cast<std::size_t>(p.owner)] += dev;
    }
    return d;
}

void run_tick(WorldState& w, int tick, RunRecord& record) {
    const auto& env = w.env;
    if (tick > 0 && Clock::is_year_start(tick)) yearly_update(w);
    const HourType hour = env.hour_type(Clock::hour_of_day(tick));
    const int n_agents = w.agent_count();

    // (1) availability
    for (auto& p : w.plants) p.available = w.availability_rng.bernoulli(p.reliability);

    // (2) renewable forecast by persistence
    const RenewableFractions realized{w.series.wind.at(tick), w.series.sun.at(tick)};
    const RenewableFractions forecast{w.last_wind.value_or(realized.wind),
                                      w.last_sun.value_or(realized.sun)};

    for (auto& p : w.plants) {
        p.marginal_cost = plant_marginal_cost(p, env, fuel_price(w, p.fuel, tick), w.co2_price);
    }
    const double profile = w.series.load.at(tick);
    for (auto& l : w.loads) l.hourly_need_mwh = l.yearly_consumption_mwh * w.demand_factor * profile;

    // (3) wholesale market
    const std::vector<double> history(w.price_history.begin(), w.price_history.end());
    std::vector<Offer> offers = producer_wholesale_bids(w.plants, w.ess, forecast, hour, history,
                                                        env.bootstrap_price);
    {
        auto demand = consumer_bids(w.loads);
        offers.insert(offers.end(), demand.begin(), demand.end());
    }
    const ClearingResult clearing = clear_double_auction(offers);

    // (4) e-programs
    const OwnershipMap owners = OwnershipMap::of(w);
    const EProgram program = build_eprograms(clearing, offers, owners);
    std::vector<double> plant_sched(w.plants.size(), 0.0);
    std::vector<double> load_cleared(w.loads.size(), 0.0);
    std::vector<EssFlows> ess_flows(w.ess.size());
    for (const auto& e : program.entries) {
        const auto idx = static_cast<std::size_t>(e.entity.index);
        switch (e.entity.kind) {
        case EntityRef::Kind::Plant: plant_sched[idx] += e.injection_mwh; break;
        case EntityRef::Kind::Load: load_cleared[idx] += e.withdrawal_mwh; break;
        case EntityRef::Kind::Ess:
            ess_flows[idx].charged_mwh += e.withdrawal_mwh;
            ess_flows[idx].discharged_wholesale_mwh += e.injection_mwh;
            break;
        }
    }

    // (5) delivery with realised renewables and post-clearing outages
    std::vector<char> outage(w.plants.size(), 0);
    if (env.post_clearing_outage_prob > 0.0) {
        for (std::size_t i = 0; i < w.plants.size(); ++i) {
            auto& p = w.plants[i];
            if (is_renewable(p.technology) || !(plant_sched[i] > 0.0)) continue;
            if (w.outage_rng.bernoulli(env.post_clearing_outage_prob)) {
                outage[i] = 1;
                p.available = false;
            }
        }
    }
    const Deviations dev =
        compute_imbalance_source(forecast, realized, w.plants, plant_sched, outage, n_agents);
    std::vector<double> production(w.plants.size());
    for (std::size_t i = 0; i < w.plants.size(); ++i) production[i] = plant_sched[i] + dev.plant_mwh[i];

    std::vector<double> agent_dev = dev.agent_mwh;
    for (std::size_t i = 0; i < w.loads.size(); ++i) {
        auto& l = w.loads[i];
        // Small loads draw their full need; large loads only what they bought.
        l.consumption_mwh = l.kind == LoadKind::Small ? l.hourly_need_mwh : load_cleared[i];
        agent_dev[static_cast<std::size_t>(l.owner)] += load_cleared[i] - l.consumption_mwh;
    }

    // (6) grid imbalance
    double inflow = std::accumulate(production.begin(), production.end(), 0.0);
    double outflow = 0.0;
    for (const auto& l : w.loads) outflow += l.consumption_mwh;
    for (const auto& f : ess_flows) {
        inflow += f.discharged_wholesale_mwh;
        outflow += f.charged_mwh;
    }
    double imbalance = inflow - outflow;
    if (std::abs(imbalance) < imbalance_eps) imbalance = 0.0;

    // (7) balancing
    std::vector<BalancingBid> ladder = producer_balancing_bids(w.plants, plant_sched, w.ess, hour);
    {
        auto flex = consumer_balancing_bids(w.loads, load_cleared);
        ladder.insert(ladder.end(), flex.begin(), flex.end());
    }
    const BalancingResult balancing = clear_balancing(imbalance, ladder);
    for (std::size_t b = 0; b < ladder.size(); ++b) {
        const double a = balancing.activated_mwh[b];
        if (!(a > 0.0)) continue;
        const auto idx = static_cast<std::size_t>(ladder[b].origin.index);
        const double sign = ladder[b].direction == Direction::Upward ? 1.0 : -1.0;
        switch (ladder[b].origin.kind) {
        case EntityRef::Kind::Plant:
            production[idx] += sign * a;
            inflow += sign * a;
            break;
        case EntityRef::Kind::Ess:
            ess_flows[idx].discharged_balancing_mwh += a;
            inflow += a;
            break;
        case EntityRef::Kind::Load:
            w.loads[idx].consumption_mwh -= a;
            outflow -= a;
            break;
        }
    }

    // (8) residual: curtail an excess, shed load on a deficit
    TickRecord rec;
    rec.tick = tick;
    rec.injection_mwh = inflow;
    rec.withdrawal_mwh = outflow;
    if (balancing.residual_mwh > 0.0) {
        if (imbalance > 0.0) {
            curtail(w.plants, production, balancing.residual_mwh);
            rec.curtailed_mwh = balancing.residual_mwh;
        } else {
            rec.unserved_mwh = balancing.residual_mwh;
            rec.blackout = true;
            ++record.blackout_counter;
        }
    }

    // (9) emissions and settlement
    std::vector<double> agent_emission(static_cast<std::size_t>(n_agents), 0.0);
    double emission = 0.0;
    for (std::size_t i = 0; i < w.plants.size(); ++i) {
        auto& p = w.plants[i];
        p.generation_mwh = production[i];
        const double content = env.fuel(p.fuel).carbon_content;
        p.emission_tco2 = (p.fuel == Fuel::Coal || p.fuel == Fuel::NaturalGas)
                              ? production[i] / p.efficiency * content
                              : 0.0;
        agent_emission[static_cast<std::size_t>(p.owner)] += p.emission_tco2;
        emission += p.emission_tco2;
    }

    SettlementInput in;
    in.clearing = &clearing;
    in.offers = offers;
    in.balancing = &balancing;
    in.ladder = ladder;
    in.agent_deviation_mwh = agent_dev;
    in.agent_emission_tco2 = agent_emission;
    in.co2_price = w.co2_price;
    in.carbon_pricing = env.carbon_pricing;
    in.scale = Clock::hour_scale_factor;
    const auto deltas = settle(in, owners, w.accounts, w.operator_id());
    for (const auto& d : deltas) {
        rec.cash_sum_eur += d.total();
        rec.cash_gross_eur += std::abs(d.wholesale) + std::abs(d.balancing) + std::abs(d.fines) +
                              std::abs(d.co2);
    }

    // (10) storage
    for (std::size_t k = 0; k < w.ess.size(); ++k) {
        auto entry = update_ess_status(w.ess[k], ess_flows[k], tick, hour, clearing.price,
                                       balancing.price, env.interest_rate_pct_per_y,
                                       env.ess_fixed_om_eur_per_mw_y);
        auto& proj = record.projects[k];
        proj.ledger.push_back(entry);
        proj.running_npv_eur = w.ess[k].npv_eur;
    }

    // (11) environment history
    if (clearing.price) {
        w.price_history.push_back(*clearing.price);
        while (static_cast<int>(w.price_history.size()) > env.price_memory_ticks) {
            w.price_history.pop_front();
        }
    } else {
        ++record.no_trade_ticks;
    }
    w.co2_price_history.push_back(w.co2_price);
    w.last_wind = realized.wind;
    w.last_sun = realized.sun;

    rec.price = clearing.price;
    rec.volume_mwh = clearing.volume_mwh;
    rec.balancing_direction = balancing.direction;
    rec.balancing_price = balancing.price;
    rec.balancing_volume_mwh = balancing.volume_mwh;
    rec.imbalance_mwh = imbalance;
    rec.co2_tco2 = emission * Clock::hour_scale_factor;
    record.cumulative_emission_tco2 += rec.co2_tco2;
    record.ticks.push_back(rec);
}

RunRecord run_simulation(WorldState& w) {
    RunRecord r;
    r.interest_rate_pct = w.env.interest_rate_pct_per_y;
    r.ticks.reserve(static_cast<std::size_t>(w.clock.horizon_ticks));
    for (const auto& e : w.ess) {
        EssProjectRecord p;
        p.capital_cost_eur = e.capital_cost_eur;
        p.annual_fixed_om_eur = w.env.ess_fixed_om_eur_per_mw_y * e.power_capacity_mw;
        p.running_npv_eur = e.npv_eur;
        p.ledger.reserve(static_cast<std::size_t>(w.clock.horizon_ticks));
        r.projects.push_back(std::move(p));
    }
    for (int t = 0; t < w.clock.horizon_ticks; ++t) run_tick(w, t, r);
    return r;
}

RunRecord run_simulation(const Scenario& scenario, const EnvironmentConfig& env,
                         std::uint64_t seed, int horizon_ticks) {
    WorldState w = build_world(scenario, env, seed, horizon_ticks);
    return run_simulation(w);
}

void write_trace_csv(std::ostream& out, const RunRecord& record) {
    out << "tick,price,volume,bal_dir,bal_price,bal_vol,blackout,curtailed,co2\n";
    for (const auto& t : record.ticks) {
        out << fmt::format("{},{},{:.10g},{},{},{:.10g},{},{:.10g},{:.10g}\n", t.tick,
                           optional_number(t.price), t.volume_mwh,
                           direction_name(t.balancing_direction),
                           optional_number(t.balancing_price), t.balancing_volume_mwh,
                           t.blackout ? 1 : 0, t.curtailed_mwh, t.co2_tco2);
    }
}

} // namespace essim
