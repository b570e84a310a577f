#include "essim/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace essim {

namespace {

struct Level {
    double price;
    double total;
    double accepted = 0.0;
    std::size_t begin; // range into the sorted index list
    std::size_t end;
};

// Groups `order` (already sorted by price) into equal-price levels.
template <typename PriceOf, typename QtyOf>
std::vector<Level> make_levels(const std::vector<std::size_t>& order, PriceOf price_of,
                               QtyOf qty_of) {
    std::vector<Level> levels;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double p = price_of(order[k]);
        if (levels.empty() || levels.back().price != p) {
            levels.push_back({p, 0.0, 0.0, k, k});
        }
        levels.back().total += qty_of(order[k]);
        levels.back().end = k + 1;
    }
    return levels;
}

// Pro-rata split of each level's accepted quantity over its members.
template <typename QtyOf>
void distribute(const std::vector<Level>& levels, const std::vector<std::size_t>& order,
                QtyOf qty_of, std::vector<double>& out) {
    for (const auto& lv : levels) {
        if (lv.accepted <= 0.0) continue;
        const bool full = lv.accepted >= lv.total;
        for (std::size_t k = lv.begin; k < lv.end; ++k) {
            const std::size_t idx = order[k];
            out[idx] = full ? qty_of(idx) : lv.accepted * qty_of(idx) / lv.total;
        }
    }
}

} // namespace

ClearingResult clear_double_auction(std::span<const Offer> offers) {
    ClearingResult r;
    r.accepted_mwh.assign(offers.size(), 0.0);

    std::vector<std::size_t> supply, demand;
    for (std::size_t i = 0; i < offers.size(); ++i) {
        if (!(offers[i].quantity_mwh > 0.0)) continue;
        (offers[i].side == Side::Supply ? supply : demand).push_back(i);
    }
    auto price_of = [&](std::size_t i) { return offers[i].price_eur_per_mwh; };
    auto qty_of = [&](std::size_t i) { return offers[i].quantity_mwh; };
    std::stable_sort(supply.begin(), supply.end(),
                     [&](std::size_t a, std::size_t b) { return price_of(a) < price_of(b); });
    std::stable_sort(demand.begin(), demand.end(),
                     [&](std::size_t a, std::size_t b) { return price_of(a) > price_of(b); });

    auto s_levels = make_levels(supply, price_of, qty_of);
    auto d_levels = make_levels(demand, price_of, qty_of);
    for (const auto& lv : s_levels) r.supply_curve.push_back({lv.price, lv.total});
    for (const auto& lv : d_levels) r.demand_curve.push_back({lv.price, lv.total});

    std::size_t i = 0, j = 0;
    double rs = s_levels.empty() ? 0.0 : s_levels[0].total;
    double rd = d_levels.empty() ? 0.0 : d_levels[0].total;
    std::optional<std::size_t> marginal;
    while (i < s_levels.size() && j < d_levels.size() &&
           s_levels[i].price <= d_levels[j].price) {
        const double q = std::min(rs, rd);
        s_levels[i].accepted += q;
        d_levels[j].accepted += q;
        r.volume_mwh += q;
        marginal = i;
        rs -= q;
        rd -= q;
        if (rs <= 0.0 && ++i < s_levels.size()) rs = s_levels[i].total;
        if (rd <= 0.0 && ++j < d_levels.size()) rd = d_levels[j].total;
    }
    if (!marginal || !(r.volume_mwh > 0.0)) {
        r.volume_mwh = 0.0;
        return r;
    }
    r.price = s_levels[*marginal].price;
    distribute(s_levels, supply, qty_of, r.accepted_mwh);
    distribute(d_levels, demand, qty_of, r.accepted_mwh);
    return r;
}

BalancingResult clear_balancing(double imbalance_mwh, std::span<const BalancingBid> ladder) {
    BalancingResult r;
    r.activated_mwh.assign(ladder.size(), 0.0);
    if (imbalance_mwh == 0.0) return r;

    const bool deficit = imbalance_mwh < 0.0;
    const Direction wanted = deficit ? Direction::Upward : Direction::Downward;
    r.direction = deficit ? BalancingDirection::Upward : BalancingDirection::Downward;

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (ladder[i].direction == wanted && ladder[i].quantity_mwh > 0.0) order.push_back(i);
    }
    auto price_of = [&](std::size_t i) { return ladder[i].price_eur_per_mwh; };
    auto qty_of = [&](std::size_t i) { return ladder[i].quantity_mwh; };
    if (deficit) {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return price_of(a) < price_of(b); });
    } else {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return price_of(a) > price_of(b); });
    }
    auto levels = make_levels(order, price_of, qty_of);

    double need = std::abs(imbalance_mwh);
    for (auto& lv : levels) {
        if (need <= 0.0) break;
        const double q = std::min(need, lv.total);
        lv.accepted = q;
        r.volume_mwh += q;
        r.price = lv.price;
        need -= q;
    }
    r.residual_mwh = std::max(0.0, need);
    distribute(levels, order, qty_of, r.activated_mwh);
    return r;
}

std::optional<int> OwnershipMap::owner(const EntityRef& ref) const {
    const std::vector<int>* table = nullptr;
    switch (ref.kind) {
    case EntityRef::Kind::Plant: table = &plant_owner; break;
    case EntityRef::Kind::Ess: table = &ess_owner; break;
    case EntityRef::Kind::Load: table = &load_owner; break;
    }
    if (ref.index < 0 || static_cast<std::size_t>(ref.index) >= table->size()) return std::nullopt;
    return (*table)[static_cast<std::size_t>(ref.index)];
}

OwnershipMap OwnershipMap::of(const WorldState& w) {
    OwnershipMap m;
    m.plant_owner.reserve(w.plants.size());
    for (const auto& p : w.plants) m.plant_owner.push_back(p.owner);
    for (const auto& e : w.ess) m.ess_owner.push_back(e.owner);
    for (const auto& l : w.loads) m.load_owner.push_back(l.owner);
    return m;
}

double EProgram::injection(const EntityRef& ref) const {
    double total = 0.0;
    for (const auto& e : entries) {
        if (e.entity == ref) total += e.injection_mwh;
    }
    return total;
}

double EProgram::withdrawal(const EntityRef& ref) const {
    double total = 0.0;
    for (const auto& e : entries) {
        if (e.entity == ref) total += e.withdrawal_mwh;
    }
    return total;
}

EProgram build_eprograms(const ClearingResult& result, std::span<const Offer> offers,
                         const OwnershipMap& owners) {
    if (result.accepted_mwh.size() != offers.size()) {
        throw std::logic_error("clearing result does not match the offer list");
    }
    EProgram program;
    if (!result.traded()) return program;
    for (std::size_t i = 0; i < offers.size(); ++i) {
        const double q = result.accepted_mwh[i];
        if (!(q > 0.0)) continue;
        const auto agent = owners.owner(offers[i].origin);
        if (!agent) throw std::logic_error("accepted offer references an unknown entity");
        EProgramEntry e;
        e.agent = *agent;
        e.entity = offers[i].origin;
        (offers[i].side == Side::Supply ? e.injection_mwh : e.withdrawal_mwh) = q;
        program.entries.push_back(e);
    }
    return program;
}

std::vector<CashDelta> settle(const SettlementInput& in, const OwnershipMap& owners,
                              std::span<AgentAccount> accounts, int operator_id) {
    std::vector<CashDelta> d(accounts.size());
    auto at = [&](int agent) -> CashDelta& {
        if (agent < 0 || static_cast<std::size_t>(agent) >= d.size()) {
            throw std::logic_error("settlement references an unknown agent");
        }
        return d[static_cast<std::size_t>(agent)];
    };
    CashDelta& op = at(operator_id);
    const double k = in.scale;

    if (in.clearing && in.clearing->traded()) {
        const double price = *in.clearing->price;
        for (std::size_t i = 0; i < in.offers.size(); ++i) {
            const double q = in.clearing->accepted_mwh[i];
            if (!(q > 0.0)) continue;
            const auto agent = owners.owner(in.offers[i].origin);
            if (!agent) throw std::logic_error("accepted offer references an unknown entity");
            const double cash = q * price * k;
            if (in.offers[i].side == Side::Supply) {
                at(*agent).wholesale += cash;
                op.wholesale -= cash;
            } else {
                at(*agent).wholesale -= cash;
                op.wholesale += cash;
            }
        }
    }

    std::optional<double> bal_price;
    if (in.balancing && in.balancing->price) {
        bal_price = *in.balancing->price;
        for (std::size_t i = 0; i < in.ladder.size(); ++i) {
            const double q = in.balancing->activated_mwh[i];
            if (!(q > 0.0)) continue;
            const auto agent = owners.owner(in.ladder[i].origin);
            if (!agent) throw std::logic_error("activated bid references an unknown entity");
            const double cash = q * *bal_price * k;
            at(*agent).balancing += cash;
            op.balancing -= cash;
        }
    }

    if (bal_price) {
        for (std::size_t a = 0; a < in.agent_deviation_mwh.size(); ++a) {
            const double dev = in.agent_deviation_mwh[a];
            if (dev == 0.0 || static_cast<int>(a) == operator_id) continue;
            const double fine = std::abs(dev) * std::abs(*bal_price) * k;
            d[a].fines -= fine;
            op.fines += fine;
        }
    }

    if (in.carbon_pricing) {
        for (std::size_t a = 0; a < in.agent_emission_tco2.size(); ++a) {
            const double e = in.agent_emission_tco2[a];
            if (e == 0.0 || static_cast<int>(a) == operator_id) continue;
            const double charge = e * in.co2_price * k;
            d[a].co2 -= charge;
            op.co2 += charge;
        }
    }

    for (std::size_t a = 0; a < accounts.size(); ++a) accounts[a].bank_balance_eur += d[a].total();
    return d;
}

} // namespace essim
