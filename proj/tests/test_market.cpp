#include "doctest.h"

#include "essim/market.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>
#include <vector>

using namespace essim;

namespace {

Offer supply(double q, double p, int idx = 0) {
    return {q, p, Side::Supply, {EntityRef::Kind::Plant, idx}};
}
Offer demand(double q, double p, int idx = 0) {
    return {q, p, Side::Demand, {EntityRef::Kind::Load, idx}};
}
BalancingBid up(double q, double p, int idx = 0) {
    return {q, p, Direction::Upward, {EntityRef::Kind::Plant, idx}};
}
BalancingBid down(double q, double p, int idx = 0) {
    return {q, p, Direction::Downward, {EntityRef::Kind::Plant, idx}};
}

} // namespace

TEST_CASE("double auction examples") {
    SUBCASE("single crossing") {
        const std::vector<Offer> o{supply(100, 10), demand(50, 30)};
        const auto r = clear_double_auction(o);
        REQUIRE(r.price);
        CHECK(*r.price == 10.0);
        CHECK(r.volume_mwh == 50.0);
        CHECK(r.accepted_mwh == std::vector<double>{50.0, 50.0});
    }
    SUBCASE("second offer partially accepted") {
        const std::vector<Offer> o{supply(50, 10, 0), supply(50, 20, 1), demand(80, 30)};
        const auto r = clear_double_auction(o);
        REQUIRE(r.price);
        CHECK(*r.price == 20.0);
        CHECK(r.volume_mwh == 80.0);
        CHECK(r.accepted_mwh[0] == 50.0);
        CHECK(r.accepted_mwh[1] == 30.0);
    }
    SUBCASE("curves do not cross") {
        const std::vector<Offer> o{supply(100, 10), demand(50, 5)};
        const auto r = clear_double_auction(o);
        CHECK_FALSE(r.price);
        CHECK(r.volume_mwh == 0.0);
    }
    SUBCASE("one-sided markets do not trade") {
        CHECK_FALSE(clear_double_auction(std::vector<Offer>{supply(10, 1)}).traded());
        CHECK_FALSE(clear_double_auction(std::vector<Offer>{demand(10, 1)}).traded());
        CHECK_FALSE(clear_double_auction(std::vector<Offer>{}).traded());
    }
    SUBCASE("ties at the margin are filled pro rata") {
        const std::vector<Offer> o{supply(30, 10, 0), supply(10, 10, 1), demand(20, 50)};
        const auto r = clear_double_auction(o);
        CHECK(r.accepted_mwh[0] == doctest::Approx(15.0));
        CHECK(r.accepted_mwh[1] == doctest::Approx(5.0));
    }
}

TEST_CASE("double auction agrees with the unit-matching oracle") {
    Rng rng(20160101);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto offers = oracle::random_auction(rng, 12);
        const auto r = clear_double_auction(offers);
        const auto o = oracle::merit_order(offers);
        REQUIRE(r.price.has_value() == o.price.has_value());
        if (o.price) CHECK(*r.price == *o.price);
        CHECK(r.volume_mwh == o.volume);

        double sold = 0.0, bought = 0.0;
        for (std::size_t i = 0; i < offers.size(); ++i) {
            CHECK(r.accepted_mwh[i] >= 0.0);
            CHECK(r.accepted_mwh[i] <= offers[i].quantity_mwh + 1e-9);
            if (r.accepted_mwh[i] > 0.0 && r.price) {
                // Accepted sellers ask no more than the price; accepted buyers bid no less.
                if (offers[i].side == Side::Supply) {
                    CHECK(offers[i].price_eur_per_mwh <= *r.price);
                } else {
                    CHECK(offers[i].price_eur_per_mwh >= *r.price);
                }
            }
            (offers[i].side == Side::Supply ? sold : bought) += r.accepted_mwh[i];
        }
        CHECK(sold == doctest::Approx(r.volume_mwh));
        CHECK(bought == doctest::Approx(r.volume_mwh));
    }
}

TEST_CASE("more demand never lowers the price") {
    Rng rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
        auto offers = oracle::random_auction(rng, 10);
        const auto before = clear_double_auction(offers);
        offers.push_back(demand(std::floor(1 + rng.uniform() * 50), 60.0, 99));
        const auto after = clear_double_auction(offers);
        if (before.price && after.price) CHECK(*after.price >= *before.price);
        CHECK(after.volume_mwh >= before.volume_mwh);
    }
}

TEST_CASE("balancing examples") {
    SUBCASE("no imbalance") {
        const std::vector<BalancingBid> ladder{up(60, 50)};
        const auto r = clear_balancing(0.0, ladder);
        CHECK(r.direction == BalancingDirection::None);
        CHECK(r.volume_mwh == 0.0);
        CHECK_FALSE(r.price);
    }
    SUBCASE("deficit walks the upward ladder") {
        const std::vector<BalancingBid> ladder{up(60, 80, 1), up(60, 50, 0), down(100, -10)};
        const auto r = clear_balancing(-100.0, ladder);
        CHECK(r.direction == BalancingDirection::Upward);
        CHECK(r.volume_mwh == 100.0);
        REQUIRE(r.price);
        CHECK(*r.price == 80.0);
        CHECK(r.activated_mwh[0] == 40.0);
        CHECK(r.activated_mwh[1] == 60.0);
        CHECK(r.activated_mwh[2] == 0.0);
        CHECK(r.residual_mwh == 0.0);
    }
    SUBCASE("exhausted ladder leaves a residual") {
        const std::vector<BalancingBid> ladder{up(30, 50), up(40, 80)};
        const auto r = clear_balancing(-100.0, ladder);
        CHECK(r.volume_mwh == 70.0);
        CHECK(r.residual_mwh == 30.0);
    }
    SUBCASE("excess backs off the least negative bid first") {
        const std::vector<BalancingBid> ladder{down(50, -40, 0), down(50, -20, 1)};
        const auto r = clear_balancing(60.0, ladder);
        CHECK(r.direction == BalancingDirection::Downward);
        CHECK(r.activated_mwh[1] == 50.0);
        CHECK(r.activated_mwh[0] == 10.0);
        REQUIRE(r.price);
        CHECK(*r.price == -40.0);
    }
}

TEST_CASE("balancing agrees with the ladder-walk oracle") {
    Rng rng(4242);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto ladder = oracle::random_ladder(rng, 12);
        const double imbalance = std::floor(rng.uniform() * 301.0) - 150.0;
        const auto r = clear_balancing(imbalance, ladder);
        const auto o = oracle::ladder_walk(imbalance, ladder);
        REQUIRE(r.price.has_value() == o.price.has_value());
        if (o.price) CHECK(*r.price == *o.price);
        CHECK(r.volume_mwh == o.volume);
        CHECK(r.residual_mwh == o.residual);
        const double activated = std::accumulate(r.activated_mwh.begin(), r.activated_mwh.end(), 0.0);
        CHECK(activated == doctest::Approx(r.volume_mwh));
    }
}

TEST_CASE("e-programs") {
    OwnershipMap owners;
    owners.plant_owner = {0, 0, 1};
    owners.ess_owner = {2};
    owners.load_owner = {3};

    SUBCASE("no trade gives an empty program") {
        const std::vector<Offer> o{supply(10, 50), demand(10, 5)};
        CHECK(build_eprograms(clear_double_auction(o), o, owners).entries.empty());
    }
    SUBCASE("one producer, two plants") {
        const std::vector<Offer> o{supply(50, 10, 0), supply(50, 20, 1), demand(80, 30, 0)};
        const auto prog = build_eprograms(clear_double_auction(o), o, owners);
        CHECK(prog.injection({EntityRef::Kind::Plant, 0}) == 50.0);
        CHECK(prog.injection({EntityRef::Kind::Plant, 1}) == 30.0);
        CHECK(prog.withdrawal({EntityRef::Kind::Load, 0}) == 80.0);
        int producer_entries = 0;
        for (const auto& e : prog.entries) producer_entries += e.agent == 0;
        CHECK(producer_entries == 2);
    }
    SUBCASE("storage purchase becomes a withdrawal") {
        const std::vector<Offer> o{supply(50, 10, 0),
                                   {5, 30, Side::Demand, {EntityRef::Kind::Ess, 0}}};
        const auto prog = build_eprograms(clear_double_auction(o), o, owners);
        CHECK(prog.withdrawal({EntityRef::Kind::Ess, 0}) == 5.0);
    }
    SUBCASE("unknown entity is an internal error") {
        const std::vector<Offer> o{supply(50, 10, 7), demand(10, 30, 0)};
        CHECK_THROWS_AS(build_eprograms(clear_double_auction(o), o, owners), std::logic_error);
    }
}

TEST_CASE("settlement") {
    OwnershipMap owners;
    owners.plant_owner = {0};
    owners.load_owner = {1};
    std::vector<AgentAccount> accounts(3);
    const int op = 2;

    SUBCASE("wholesale only is a closed system") {
        const std::vector<Offer> o{supply(100, 10, 0), demand(50, 30, 0)};
        const auto clearing = clear_double_auction(o);
        SettlementInput in;
        in.clearing = &clearing;
        in.offers = o;
        const auto d = settle(in, owners, accounts, op);
        CHECK(d[0].wholesale == doctest::Approx(50 * 10 * 30.0));
        CHECK(d[1].wholesale == doctest::Approx(-50 * 10 * 30.0));
        CHECK(d[0].total() + d[1].total() + d[2].total() == doctest::Approx(0.0));
        CHECK(accounts[0].bank_balance_eur == doctest::Approx(15000.0));
    }
    SUBCASE("CO2 charge") {
        const std::vector<double> emission{100.0, 0.0, 0.0};
        SettlementInput in;
        in.agent_emission_tco2 = emission;
        in.co2_price = 25.0;
        const auto d = settle(in, owners, accounts, op);
        CHECK(d[op].co2 == doctest::Approx(2500.0 * 30.0));
        CHECK(d[0].co2 == doctest::Approx(-2500.0 * 30.0));
    }
    SUBCASE("imbalance fine") {
        const std::vector<BalancingBid> ladder{up(100, 80, 0)};
        const auto bal = clear_balancing(-10.0, ladder);
        const std::vector<double> deviation{0.0, -10.0, 0.0};
        SettlementInput in;
        in.balancing = &bal;
        in.ladder = ladder;
        in.agent_deviation_mwh = deviation;
        const auto d = settle(in, owners, accounts, op);
        CHECK(d[1].fines == doctest::Approx(-800.0 * 30.0));
        CHECK(d[0].balancing == doctest::Approx(800.0 * 30.0));
        double sum = 0.0;
        for (const auto& x : d) sum += x.total();
        CHECK(sum == doctest::Approx(0.0));
    }
}
