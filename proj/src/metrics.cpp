#include "essim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace essim {

double project_npv(std::span<const EssLedgerEntry> ledger, double capital_cost_eur,
                   double annual_fixed_om_eur, double interest_rate_pct, int horizon_ticks) {
    const double per_tick_om = annual_fixed_om_eur / Clock::ticks_per_year;
    std::vector<double> flow(static_cast<std::size_t>(std::max(horizon_ticks, 0)), -per_tick_om);
    for (const auto& e : ledger) {
        if (e.tick < 0 || e.tick >= horizon_ticks) {
            throw std::out_of_range("ledger entry outside the horizon");
        }
        flow[static_cast<std::size_t>(e.tick)] += e.revenue_eur - e.purchase_eur;
    }
    double npv = -capital_cost_eur;
    const double base = 1.0 + interest_rate_pct / 100.0;
    for (int year_start = 0; year_start < horizon_ticks; year_start += Clock::ticks_per_year) {
        const int end = std::min(horizon_ticks, year_start + Clock::ticks_per_year);
        double year_flow = 0.0;
        for (int t = year_start; t < end; ++t) year_flow += flow[static_cast<std::size_t>(t)];
        npv += year_flow / std::pow(base, Clock::year(year_start));
    }
    return npv;
}

RunMetrics run_metrics(const RunRecord& record, std::int64_t scenario_id, int rep,
                       std::uint64_t seed) {
    RunMetrics m;
    m.scenario_id = scenario_id;
    m.rep = rep;
    m.seed = seed;
    if (!record.projects.empty()) {
        double sum = 0.0;
        for (const auto& p : record.projects) sum += p.running_npv_eur;
        m.run_npv_eur = sum / static_cast<double>(record.projects.size());
    }
    double price_sum = 0.0;
    int traded = 0;
    for (const auto& t : record.ticks) {
        if (t.price) {
            price_sum += *t.price;
            ++traded;
        }
    }
    if (traded > 0) m.run_price_eur_per_mwh = price_sum / traded;
    m.run_blackout_hours = record.blackout_counter;
    m.run_emission_tco2 = record.cumulative_emission_tco2;
    m.no_trade_ticks = record.no_trade_ticks;
    return m;
}

ScenarioMetrics scenario_aggregate(std::span<const RunMetrics> runs) {
    if (runs.empty()) throw std::invalid_argument("scenario_aggregate needs at least one run");
    ScenarioMetrics s;
    s.scenario_id = runs.front().scenario_id;
    s.runs = static_cast<int>(runs.size());
    double npv = 0.0, price = 0.0;
    int npv_n = 0, price_n = 0;
    bool all_positive = true;
    for (const auto& r : runs) {
        if (r.scenario_id != s.scenario_id) {
            throw std::invalid_argument("scenario_aggregate got runs of different scenarios");
        }
        if (r.run_npv_eur) {
            npv += *r.run_npv_eur;
            ++npv_n;
            all_positive = all_positive && *r.run_npv_eur > 0.0;
        } else {
            all_positive = false;
        }
        if (r.run_price_eur_per_mwh) {
            price += *r.run_price_eur_per_mwh;
            ++price_n;
        }
        s.blackout_hours += r.run_blackout_hours;
        s.emission_tco2 += r.run_emission_tco2;
        s.no_trade_ticks += r.no_trade_ticks;
    }
    const double n = static_cast<double>(runs.size());
    if (npv_n > 0) s.npv_eur = npv / npv_n;
    if (price_n > 0) s.price_eur_per_mwh = price / price_n;
    s.blackout_hours /= n;
    s.emission_tco2 /= n;
    s.no_trade_ticks /= n;
    s.absolute_profitability = npv_n > 0 && all_positive;
    return s;
}

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool degenerate() const { return !(hi > lo); }
};

double ascending(double v, const Range& r) {
    if (r.degenerate()) return 50.0;
    return (v - r.lo) / (r.hi - r.lo) * 100.0;
}

double descending(double v, const Range& r) {
    if (r.degenerate()) return 50.0;
    return (r.hi - v) / (r.hi - r.lo) * 100.0;
}

} // namespace

Normalization normalize_scores(std::span<const ScenarioMetrics> scenarios,
                               const GoalWeights& weights) {
    Range npv, price, blackout, emission;
    for (const auto& s : scenarios) {
        if (s.npv_eur) npv.add(*s.npv_eur);
        if (s.price_eur_per_mwh) price.add(*s.price_eur_per_mwh);
        blackout.add(s.blackout_hours);
        emission.add(s.emission_tco2);
    }
    Normalization out;
    out.profitability_degenerate = npv.degenerate();
    out.affordability_degenerate = price.degenerate();
    out.availability_degenerate = blackout.degenerate();
    out.acceptability_degenerate = emission.degenerate();

    const double wsum = weights.affordability + weights.acceptability + weights.availability;
    if (!(wsum > 0.0)) throw std::invalid_argument("government-goal weights must sum to > 0");

    out.scores.reserve(scenarios.size());
    for (const auto& s : scenarios) {
        GoalScores g;
        if (s.npv_eur) g.profitability = ascending(*s.npv_eur, npv);
        // A scenario where nothing ever traded is the least affordable.
        g.affordability = s.price_eur_per_mwh ? descending(*s.price_eur_per_mwh, price) : 0.0;
        g.availability = descending(s.blackout_hours, blackout);
        g.acceptability = descending(s.emission_tco2, emission);
        g.government_goal = (weights.affordability * g.affordability +
                             weights.acceptability * g.acceptability +
                             weights.availability * g.availability) /
                            wsum;
        out.scores.push_back(g);
    }
    return out;
}

Threshold profitability_threshold(std::span<const ScenarioMetrics> scenarios) {
    Range npv;
    for (const auto& s : scenarios) {
        if (s.npv_eur) npv.add(*s.npv_eur);
    }
    if (npv.degenerate()) {
        if (npv.lo == std::numeric_limits<double>::infinity()) return {50.0, true};
        return {npv.lo > 0.0 ? 0.0 : (npv.lo < 0.0 ? 100.0 : 50.0), true};
    }
    const double t = (0.0 - npv.lo) / (npv.hi - npv.lo) * 100.0;
    if (t < 0.0) return {0.0, true};
    if (t > 100.0) return {100.0, true};
    return {t, false};
}

} // namespace essim
