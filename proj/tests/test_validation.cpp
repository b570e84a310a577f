#include "doctest.h"

#include "essim/validation.hpp"

#include <sstream>

using namespace essim;

TEST_CASE("price statistics") {
    const std::vector<double> v{4, 1, 3, 2};
    const auto s = price_stats(v);
    CHECK(s.mean == 2.5);
    CHECK(s.min == 1.0);
    CHECK(s.max == 4.0);
    CHECK(s.median == 2.5);
    CHECK(s.q1 == doctest::Approx(1.75));
    CHECK(s.q3 == doctest::Approx(3.25));
    CHECK_THROWS_AS(price_stats({}), std::invalid_argument);
}

TEST_CASE("pearson correlation") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{2, 4, 6, 8};
    const std::vector<double> z{8, 6, 4, 2};
    const std::vector<double> flat{5, 5, 5, 5};
    CHECK(*pearson(x, y) == doctest::Approx(1.0));
    CHECK(*pearson(x, z) == doctest::Approx(-1.0));
    CHECK_FALSE(pearson(x, flat));
    CHECK_FALSE(pearson(std::vector<double>{1}, std::vector<double>{1}));
}

TEST_CASE("monthly prices of a run") {
    Scenario s;
    const auto r = run_simulation(s, EnvironmentConfig{}, 1, Clock::ticks_for_years(3));
    const auto monthly = monthly_prices(r);
    REQUIRE(monthly.size() == 36u);
    double first = 0.0;
    for (int h = 0; h < 24; ++h) first += *r.ticks[static_cast<std::size_t>(h)].price;
    CHECK(monthly[0] == doctest::Approx(first / 24.0));

    SUBCASE("self comparison") {
        const auto report = compare_prices(monthly, monthly);
        CHECK(report.rows.size() == 3u);
        REQUIRE(report.correlation);
        CHECK(*report.correlation == doctest::Approx(1.0));
    }
    SUBCASE("constant reference has no correlation") {
        const std::vector<double> flat(36, 42.0);
        const auto report = compare_prices(monthly, flat);
        CHECK_FALSE(report.correlation);
        std::ostringstream out;
        write_validation_csv(out, report);
        CHECK(out.str().find(",NA\n") != std::string::npos);
    }
    SUBCASE("coverage mismatches") {
        const std::vector<double> ragged(30, 42.0);
        CHECK_THROWS_AS(compare_prices(monthly, ragged), ConfigError);
        const std::vector<double> longer(48, 42.0);
        CHECK_THROWS_AS(compare_prices(monthly, longer), ConfigError);
    }
}
