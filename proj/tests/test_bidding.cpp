#include "doctest.h"

#include "essim/bidding.hpp"

#include <vector>

using namespace essim;

namespace {

PowerPlant plant(Technology t, double capacity, double efficiency, double vom = 0.0) {
    PowerPlant p;
    p.technology = t;
    p.fuel = fuel_of(t);
    p.capacity_mw = capacity;
    p.efficiency = efficiency;
    p.variable_om_eur_per_mwh = vom;
    p.flexible = !is_renewable(t) && t != Technology::Nuclear;
    return p;
}

EssUnit storage(double power, double energy, double content, double mc,
                BusinessModel bm = BusinessModel::WholesaleArbitrage) {
    EssUnit e;
    e.business_model = bm;
    e.power_capacity_mw = power;
    e.energy_capacity_mwh = energy;
    e.content_mwh = content;
    e.marginal_cost = mc;
    return e;
}

} // namespace

TEST_CASE("plant marginal cost") {
    SUBCASE("gas without carbon pricing") {
        const auto ccgt = plant(Technology::CCGT, 500, 0.56, 2.0);
        CHECK(plant_marginal_cost(ccgt, 20.0, 1.0, 0.2, false, 25.0) ==
              doctest::Approx(20.0 / 0.56 + 2.0));
        CHECK(plant_marginal_cost(ccgt, 20.0, 1.0, 0.2, false, 25.0) ==
              doctest::Approx(37.714).epsilon(1e-4));
    }
    SUBCASE("coal with carbon pricing") {
        const auto coal = plant(Technology::Coal, 500, 0.40);
        CHECK(plant_marginal_cost(coal, 65.12, 8.14, 0.34, true, 25.0) == doctest::Approx(41.25));
    }
    SUBCASE("renewables are free") {
        const auto wind = plant(Technology::WindOnshore, 100, 1.0, 50.0);
        CHECK(plant_marginal_cost(wind, 99.0, 1.0, 1.0, true, 99.0) == 0.0);
    }
    SUBCASE("zero efficiency is a domain error") {
        const auto broken = plant(Technology::OCGT, 500, 0.0);
        CHECK_THROWS_AS(plant_marginal_cost(broken, 20.0, 1.0, 0.2, true, 25.0), std::domain_error);
    }
}

TEST_CASE("marginal cost rises with fuel and CO2 prices") {
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const auto p = plant(rng.bernoulli(0.5) ? Technology::Coal : Technology::OCGT, 500,
                             0.2 + 0.6 * rng.uniform(), 5.0 * rng.uniform());
        const double fuel = 100.0 * rng.uniform();
        const double co2 = 100.0 * rng.uniform();
        const double base = plant_marginal_cost(p, fuel, 8.14, 0.34, true, co2);
        CHECK(plant_marginal_cost(p, fuel + 1.0, 8.14, 0.34, true, co2) > base);
        CHECK(plant_marginal_cost(p, fuel, 8.14, 0.34, true, co2 + 1.0) > base);
        CHECK(plant_marginal_cost(p, fuel, 8.14, 0.34, false, co2) <= base);
    }
}

TEST_CASE("wholesale offers of plants") {
    std::vector<PowerPlant> plants{plant(Technology::SolarPV, 100, 1.0),
                                   plant(Technology::Coal, 500, 0.4),
                                   plant(Technology::WindOnshore, 100, 1.0)};
    plants[1].marginal_cost = 41.25;
    const RenewableFractions forecast{0.7, 0.0};
    const auto offers = producer_wholesale_bids(plants, {}, forecast, HourType::OffPeak, {}, 40.0);
    REQUIRE(offers.size() == 2); // night-time solar is dropped
    CHECK(offers[0].quantity_mwh == 500.0);
    CHECK(offers[0].price_eur_per_mwh == 41.25);
    CHECK(offers[1].quantity_mwh == doctest::Approx(70.0));
    CHECK(offers[1].price_eur_per_mwh == 0.0);

    plants[1].available = false;
    CHECK(producer_wholesale_bids(plants, {}, forecast, HourType::OffPeak, {}, 40.0).size() == 1);
}

TEST_CASE("storage bids") {
    SUBCASE("off-peak purchase limited by headroom") {
        const auto bid = ess_offpeak_bid(storage(10, 100, 95, 0), 0, {}, 40.0);
        REQUIRE(bid);
        CHECK(bid->quantity_mwh == 5.0);
        CHECK(bid->side == Side::Demand);
        CHECK(bid->price_eur_per_mwh == 40.0);
    }
    SUBCASE("willingness to pay is the mean of the price memory") {
        const std::vector<double> flat(24, 40.0);
        CHECK(expected_price(flat, 99.0) == 40.0);
        const std::vector<double> two{30.0, 50.0};
        CHECK(expected_price(two, 99.0) == 40.0);
        CHECK(expected_price({}, 99.0) == 99.0);
    }
    SUBCASE("full store does not bid") {
        CHECK_FALSE(ess_offpeak_bid(storage(10, 100, 100, 0), 0, {}, 40.0));
    }
    SUBCASE("empty store makes no peak offer") {
        CHECK(std::holds_alternative<std::monostate>(ess_peak_offer(storage(10, 100, 0, 0), 0)));
    }
    SUBCASE("peak offer limited by power") {
        const auto v = ess_peak_offer(storage(10, 100, 25, 30), 0);
        REQUIRE(std::holds_alternative<Offer>(v));
        CHECK(std::get<Offer>(v).quantity_mwh == 10.0);
        CHECK(std::get<Offer>(v).price_eur_per_mwh == 30.0);
    }
    SUBCASE("reserve units go to the balancing market") {
        const auto v = ess_peak_offer(storage(10, 100, 25, 30, BusinessModel::ReserveCapacity), 0);
        REQUIRE(std::holds_alternative<BalancingBid>(v));
        CHECK(std::get<BalancingBid>(v).direction == Direction::Upward);
        CHECK(std::get<BalancingBid>(v).quantity_mwh == 10.0);
    }
}

TEST_CASE("consumer bids") {
    std::vector<Load> loads(3);
    loads[0].kind = LoadKind::Small;
    loads[0].hourly_need_mwh = 1200.0;
    loads[0].willingness_to_pay = 200.0;
    loads[1].kind = LoadKind::Large;
    loads[1].hourly_need_mwh = 50.0;
    loads[1].willingness_to_pay = 0.0;
    loads[2].hourly_need_mwh = 0.0;
    const auto bids = consumer_bids(loads);
    REQUIRE(bids.size() == 2);
    CHECK(bids[0].quantity_mwh == 1200.0);
    CHECK(bids[0].price_eur_per_mwh == 200.0);
    CHECK(bids[1].price_eur_per_mwh == 0.0);
}

TEST_CASE("balancing bids of producers") {
    std::vector<PowerPlant> plants{plant(Technology::CCGT, 500, 0.56),
                                   plant(Technology::CCGT, 500, 0.56),
                                   plant(Technology::WindOnshore, 100, 1.0),
                                   plant(Technology::OCGT, 500, 0.39)};
    for (auto& p : plants) p.marginal_cost = is_renewable(p.technology) ? 0.0 : 37.7;
    const std::vector<double> scheduled{500.0, 300.0, 80.0, 0.0};
    const auto bids = producer_balancing_bids(plants, scheduled, {}, HourType::OffPeak);
    REQUIRE(bids.size() == 3);
    CHECK(bids[0].direction == Direction::Downward);
    CHECK(bids[0].quantity_mwh == 500.0);
    CHECK(bids[0].price_eur_per_mwh == -37.7);
    CHECK(bids[1].direction == Direction::Upward);
    CHECK(bids[1].quantity_mwh == 200.0);
    CHECK(bids[2].quantity_mwh == 500.0);

    const std::vector<EssUnit> ess{storage(10, 100, 50, 20, BusinessModel::ReserveCapacity)};
    CHECK(producer_balancing_bids(plants, scheduled, ess, HourType::Peak).size() == 4);
    CHECK(producer_balancing_bids(plants, scheduled, ess, HourType::OffPeak).size() == 3);
}
