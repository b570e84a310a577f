#pragma once

#include "essim/bidding.hpp"

#include <optional>
#include <span>
#include <vector>

namespace essim {

struct CurveStep {
    double price_eur_per_mwh = 0.0;
    double quantity_mwh = 0.0; // aggregated over offers at this price
};

struct ClearingResult {
    std::optional<double> price; // empty on no-trade ticks
    double volume_mwh = 0.0;
    std::vector<double> accepted_mwh;  // parallel to the input offers
    std::vector<CurveStep> supply_curve; // ascending price
    std::vector<CurveStep> demand_curve; // descending price

    bool traded() const { return price.has_value(); }
};

// Uniform-price double auction. Supply is stacked in ascending price order,
// demand in descending order; the traded volume is where the curves cross
// and the price is that of the marginal accepted supply step. Offers sharing
// the marginal price are filled pro rata.
ClearingResult clear_double_auction(std::span<const Offer> offers);

enum class BalancingDirection { None, Upward, Downward };

struct BalancingResult {
    BalancingDirection direction = BalancingDirection::None;
    std::optional<double> price;
    double volume_mwh = 0.0;
    std::vector<double> activated_mwh; // parallel to the ladder
    double residual_mwh = 0.0;         // unresolved part of |imbalance|
};

// Deficit (imbalance < 0) walks the upward bids from the cheapest; excess
// walks the downward bids from the least negative price. The marginal
// activated bid sets the price.
BalancingResult clear_balancing(double imbalance_mwh, std::span<const BalancingBid> ladder);

// Maps a physical entity to its controlling agent.
struct OwnershipMap {
    std::vector<int> plant_owner;
    std::vector<int> ess_owner;
    std::vector<int> load_owner;

    std::optional<int> owner(const EntityRef& ref) const;
    static OwnershipMap of(const WorldState& world);
};

struct EProgramEntry {
    int agent = -1;
    EntityRef entity;
    double injection_mwh = 0.0;
    double withdrawal_mwh = 0.0;
};

struct EProgram {
    std::vector<EProgramEntry> entries;

    double injection(const EntityRef& ref) const;
    double withdrawal(const EntityRef& ref) const;
};

// Throws std::logic_error when an accepted offer names an unknown entity.
EProgram build_eprograms(const ClearingResult& result, std::span<const Offer> offers,
                         const OwnershipMap& owners);

struct CashDelta {
    double wholesale = 0.0;
    double balancing = 0.0;
    double fines = 0.0;
    double co2 = 0.0;

    double total() const { return wholesale + balancing + fines + co2; }
};

struct SettlementInput {
    const ClearingResult* clearing = nullptr;
    std::span<const Offer> offers;
    const BalancingResult* balancing = nullptr;
    std::span<const BalancingBid> ladder;
    std::span<const double> agent_deviation_mwh; // signed, indexed by agent id
    std::span<const double> agent_emission_tco2; // physical, indexed by agent id
    double co2_price = 0.0;
    bool carbon_pricing = true;
    double scale = 30.0; // real hours per model hour
};

// Cash of one tick. Buyers pay and sellers receive the clearing price through
// the market operator; activated balancing providers receive the balancing
// price; every agent deviating from its program pays |deviation| x |price|;
// emitters pay the CO2 price. Everything is scaled by `scale`. Returns one
// delta per agent and adds it to the bank balances.
std::vector<CashDelta> settle(const SettlementInput& in, const OwnershipMap& owners,
                              std::span<AgentAccount> accounts, int operator_id);

} // namespace essim
