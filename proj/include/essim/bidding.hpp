#pragma once

#include "essim/types.hpp"
#include "essim/world.hpp"

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace essim {

enum class Side { Supply, Demand };
enum class Direction { Upward, Downward };

// Wholesale offer (supply) or bid (demand).
struct Offer {
    double quantity_mwh = 0.0;
    double price_eur_per_mwh = 0.0;
    Side side = Side::Supply;
    EntityRef origin;
};

struct BalancingBid {
    double quantity_mwh = 0.0;
    double price_eur_per_mwh = 0.0; // negated marginal cost for downward bids
    Direction direction = Direction::Upward;
    EntityRef origin;
};

struct RenewableFractions {
    double wind = 0.0;
    double sun = 0.0;

    double of(Technology t) const { return t == Technology::SolarPV ? sun : wind; }
};

// Fuel cost over efficiency plus variable O&M, plus the carbon term when
// carbon pricing is on. Renewables cost nothing.
double plant_marginal_cost(const PowerPlant& plant, double fuel_price, double fuel_energy_value,
                           double fuel_carbon_content, bool carbon_pricing, double co2_price);

double plant_marginal_cost(const PowerPlant& plant, const EnvironmentConfig& env,
                           double fuel_price, double co2_price);

// Mean of the price history (all of it when shorter than the memory);
// bootstrap price when empty.
double expected_price(std::span<const double> history, double bootstrap_price);

std::optional<Offer> ess_offpeak_bid(const EssUnit& ess, int ess_index,
                                     std::span<const double> history, double bootstrap_price);

// Wholesale supply offer for arbitrage units, upward balancing bid for
// reserve units, nothing when empty.
std::variant<std::monostate, Offer, BalancingBid> ess_peak_offer(const EssUnit& ess,
                                                                 int ess_index);

// Offers of every plant and ESS in the fleet. Plants must carry this tick's
// availability and marginal cost.
std::vector<Offer> producer_wholesale_bids(std::span<const PowerPlant> plants,
                                           std::span<const EssUnit> ess,
                                           const RenewableFractions& forecast, HourType hour,
                                           std::span<const double> price_history,
                                           double bootstrap_price);

// One demand bid per load at its maximum willingness to pay. Loads must
// carry this tick's hourly need.
std::vector<Offer> consumer_bids(std::span<const Load> loads);

// `scheduled_mwh[i]` is plant i's contracted generation in the e-program.
std::vector<BalancingBid> producer_balancing_bids(std::span<const PowerPlant> plants,
                                                  std::span<const double> scheduled_mwh,
                                                  std::span<const EssUnit> ess, HourType hour);

// Flexible large loads offer to give up their contracted consumption.
std::vector<BalancingBid> consumer_balancing_bids(std::span<const Load> loads,
                                                  std::span<const double> contracted_mwh);

} // namespace essim
