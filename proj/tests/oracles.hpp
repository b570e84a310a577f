#pragma once

// Brute-force reference implementations and random instance generators
// shared by the unit tests and the acceptance runner.

#include "essim/market.hpp"
#include "essim/simulation.hpp"
#include "essim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace oracle {

struct Clearing {
    std::optional<double> price;
    double volume = 0.0;
};

// Expands every offer into 1 MWh units and matches the cheapest supply unit
// with the dearest demand unit until they stop crossing. Quantities must be
// integral.
inline Clearing merit_order(const std::vector<essim::Offer>& offers) {
    std::vector<double> s, d;
    for (const auto& o : offers) {
        const auto n = static_cast<long>(std::lround(o.quantity_mwh));
        for (long k = 0; k < n; ++k) {
            (o.side == essim::Side::Supply ? s : d).push_back(o.price_eur_per_mwh);
        }
    }
    std::sort(s.begin(), s.end());
    std::sort(d.begin(), d.end(), std::greater<>());
    Clearing c;
    std::size_t k = 0;
    while (k < s.size() && k < d.size() && s[k] <= d[k]) ++k;
    if (k > 0) {
        c.volume = static_cast<double>(k);
        c.price = s[k - 1];
    }
    return c;
}

struct Balancing {
    std::optional<double> price;
    double volume = 0.0;
    double residual = 0.0;
};

// Unit-by-unit walk of the ladder in activation order.
inline Balancing ladder_walk(double imbalance, const std::vector<essim::BalancingBid>& ladder) {
    Balancing b;
    if (imbalance == 0.0) return b;
    const bool deficit = imbalance < 0.0;
    std::vector<double> units;
    for (const auto& bid : ladder) {
        if ((bid.direction == essim::Direction::Upward) != deficit) continue;
        const auto n = static_cast<long>(std::lround(bid.quantity_mwh));
        for (long k = 0; k < n; ++k) units.push_back(bid.price_eur_per_mwh);
    }
    if (deficit) {
        std::sort(units.begin(), units.end());
    } else {
        std::sort(units.begin(), units.end(), std::greater<>());
    }
    const auto need = static_cast<std::size_t>(std::lround(std::abs(imbalance)));
    const std::size_t take = std::min(need, units.size());
    b.volume = static_cast<double>(take);
    b.residual = static_cast<double>(need - take);
    if (take > 0) b.price = units[take - 1];
    return b;
}

// Up to `max_offers` offers with integral quantities and a small set of
// integral prices, so ties are frequent.
inline std::vector<essim::Offer> random_auction(essim::Rng& rng, int max_offers) {
    const int n = static_cast<int>(rng.uniform() * (max_offers + 1));
    std::vector<essim::Offer> offers;
    for (int i = 0; i < n; ++i) {
        essim::Offer o;
        o.side = rng.bernoulli(0.5) ? essim::Side::Supply : essim::Side::Demand;
        o.quantity_mwh = std::floor(rng.uniform() * 60.0);
        o.price_eur_per_mwh = std::floor(rng.uniform() * 12.0) * 5.0;
        o.origin = {essim::EntityRef::Kind::Plant, i};
        offers.push_back(o);
    }
    return offers;
}

inline std::vector<essim::BalancingBid> random_ladder(essim::Rng& rng, int max_bids) {
    const int n = static_cast<int>(rng.uniform() * (max_bids + 1));
    std::vector<essim::BalancingBid> ladder;
    for (int i = 0; i < n; ++i) {
        essim::BalancingBid b;
        b.direction = rng.bernoulli(0.5) ? essim::Direction::Upward : essim::Direction::Downward;
        b.quantity_mwh = std::floor(rng.uniform() * 60.0);
        const double mc = std::floor(rng.uniform() * 10.0) * 10.0;
        b.price_eur_per_mwh = b.direction == essim::Direction::Upward ? mc : -mc;
        b.origin = {essim::EntityRef::Kind::Plant, i};
        ladder.push_back(b);
    }
    return ladder;
}

// Per-tick discounting of a ledger, written independently of project_npv.
inline double discounted_ledger(const std::vector<essim::EssLedgerEntry>& ledger, double capital,
                                double annual_om, double rate_pct, int horizon_ticks) {
    double npv = -capital;
    std::vector<double> flow(static_cast<std::size_t>(horizon_ticks), 0.0);
    for (const auto& e : ledger) flow[static_cast<std::size_t>(e.tick)] += e.revenue_eur - e.purchase_eur;
    for (int t = 1; t <= horizon_ticks; ++t) {
        const int year = (t - 1) / 288 + 1;
        const double f = flow[static_cast<std::size_t>(t - 1)] - annual_om / 288.0;
        npv += f / std::pow(1.0 + rate_pct / 100.0, year);
    }
    return npv;
}

} // namespace oracle
