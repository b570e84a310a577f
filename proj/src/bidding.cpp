#include "essim/bidding.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace essim {

namespace {

// Relative slack for "fully dispatched" comparisons.
constexpr double dispatch_eps = 1e-9;

} // namespace

double plant_marginal_cost(const PowerPlant& plant, double fuel_price, double fuel_energy_value,
                           double fuel_carbon_content, bool carbon_pricing, double co2_price) {
    if (is_renewable(plant.technology)) return 0.0;
    if (!(plant.efficiency > 0.0)) throw std::domain_error("plant efficiency must be > 0");
    if (!(fuel_energy_value > 0.0)) throw std::domain_error("fuel energy value must be > 0");
    double mc = fuel_price / (plant.efficiency * fuel_energy_value) + plant.variable_om_eur_per_mwh;
    if (carbon_pricing) mc += fuel_carbon_content / plant.efficiency * co2_price;
    return mc;
}

double plant_marginal_cost(const PowerPlant& plant, const EnvironmentConfig& env,
                           double fuel_price, double co2_price) {
    const auto& f = env.fuel(plant.fuel);
    return plant_marginal_cost(plant, fuel_price, f.energy_value, f.carbon_content,
                               env.carbon_pricing, co2_price);
}

double expected_price(std::span<const double> history, double bootstrap_price) {
    if (history.empty()) return bootstrap_price;
    return std::accumulate(history.begin(), history.end(), 0.0) /
           static_cast<double>(history.size());
}

std::optional<Offer> ess_offpeak_bid(const EssUnit& ess, int ess_index,
                                     std::span<const double> history, double bootstrap_price) {
    const double headroom = std::max(0.0, ess.energy_capacity_mwh - ess.content_mwh);
    const double q = std::min(ess.power_capacity_mw, headroom);
    if (!(q > 0.0)) return std::nullopt;
    return Offer{q, expected_price(history, bootstrap_price), Side::Demand,
                 {EntityRef::Kind::Ess, ess_index}};
}

std::variant<std::monostate, Offer, BalancingBid> ess_peak_offer(const EssUnit& ess,
                                                                 int ess_index) {
    const double q = std::min(ess.power_capacity_mw, ess.content_mwh);
    if (!(q > 0.0)) return std::monostate{};
    const EntityRef ref{EntityRef::Kind::Ess, ess_index};
    if (ess.business_model == BusinessModel::WholesaleArbitrage) {
        return Offer{q, ess.marginal_cost, Side::Supply, ref};
    }
    return BalancingBid{q, ess.marginal_cost, Direction::Upward, ref};
}

std::vector<Offer> producer_wholesale_bids(std::span<const PowerPlant> plants,
                                           std::span<const EssUnit> ess,
                                           const RenewableFractions& forecast, HourType hour,
                                           std::span<const double> price_history,
                                           double bootstrap_price) {
    std::vector<Offer> offers;
    offers.reserve(plants.size() + ess.size());
    for (std::size_t i = 0; i < plants.size(); ++i) {
        const auto& p = plants[i];
        if (!p.available) continue;
        const double q = is_renewable(p.technology) ? p.capacity_mw * forecast.of(p.technology)
                                                    : p.capacity_mw;
        if (!(q > 0.0)) continue;
        offers.push_back({q, p.marginal_cost, Side::Supply,
                          {EntityRef::Kind::Plant, static_cast<int>(i)}});
    }
    for (std::size_t k = 0; k < ess.size(); ++k) {
        const int idx = static_cast<int>(k);
        if (hour == HourType::OffPeak) {
            if (auto bid = ess_offpeak_bid(ess[k], idx, price_history, bootstrap_price)) {
                offers.push_back(*bid);
            }
        } else if (auto peak = ess_peak_offer(ess[k], idx); std::holds_alternative<Offer>(peak)) {
            offers.push_back(std::get<Offer>(peak));
        }
    }
    return offers;
}

std::vector<Offer> consumer_bids(std::span<const Load> loads) {
    std::vector<Offer> bids;
    bids.reserve(loads.size());
    for (std::size_t i = 0; i < loads.size(); ++i) {
        const auto& l = loads[i];
        if (!(l.hourly_need_mwh > 0.0)) continue;
        bids.push_back({l.hourly_need_mwh, l.willingness_to_pay, Side::Demand,
                        {EntityRef::Kind::Load, static_cast<int>(i)}});
    }
    return bids;
}

std::vector<BalancingBid> producer_balancing_bids(std::span<const PowerPlant> plants,
                                                  std::span<const double> scheduled_mwh,
                                                  std::span<const EssUnit> ess, HourType hour) {
    if (scheduled_mwh.size() != plants.size()) {
        throw std::invalid_argument("scheduled_mwh must have one entry per plant");
    }
    std::vector<BalancingBid> bids;
    for (std::size_t i = 0; i < plants.size(); ++i) {
        const auto& p = plants[i];
        if (!p.flexible || !p.available) continue;
        const EntityRef ref{EntityRef::Kind::Plant, static_cast<int>(i)};
        const double contracted = scheduled_mwh[i];
        if (contracted > 0.0 && contracted >= p.capacity_mw * (1.0 - dispatch_eps)) {
            bids.push_back({p.capacity_mw, -p.marginal_cost, Direction::Downward, ref});
        } else {
            const double residual = p.capacity_mw - contracted;
            if (residual > 0.0) bids.push_back({residual, p.marginal_cost, Direction::Upward, ref});
        }
    }
    if (hour == HourType::Peak) {
        for (std::size_t k = 0; k < ess.size(); ++k) {
            auto peak = ess_peak_offer(ess[k], static_cast<int>(k));
            if (std::holds_alternative<BalancingBid>(peak)) {
                bids.push_back(std::get<BalancingBid>(peak));
            }
        }
    }
    return bids;
}

std::vector<BalancingBid> consumer_balancing_bids(std::span<const Load> loads,
                                                  std::span<const double> contracted_mwh) {
    if (contracted_mwh.size() != loads.size()) {
        throw std::invalid_argument("contracted_mwh must have one entry per load");
    }
    std::vector<BalancingBid> bids;
    for (std::size_t i = 0; i < loads.size(); ++i) {
        const auto& l = loads[i];
        if (!l.flexible || l.kind != LoadKind::Large || !(contracted_mwh[i] > 0.0)) continue;
        bids.push_back({contracted_mwh[i], l.willingness_to_pay, Direction::Upward,
                        {EntityRef::Kind::Load, static_cast<int>(i)}});
    }
    return bids;
}

} // namespace essim
