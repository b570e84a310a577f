#pragma once

#include <cstdint>

namespace essim {

// One model hour per tick. 24 ticks form a model month, 12 model months a
// model year, and each tick stands in for 30 real hours when accounting cash.
struct Clock {
    static constexpr int hours_per_day = 24;
    static constexpr int days_per_year = 12;
    static constexpr int ticks_per_year = hours_per_day * days_per_year;
    static constexpr double hour_scale_factor = 30.0;

    int horizon_ticks = 20 * ticks_per_year;

    static constexpr int year(int tick) { return tick / ticks_per_year + 1; }
    static constexpr int hour_of_day(int tick) { return tick % hours_per_day; }
    static constexpr int month(int tick) { return (tick / hours_per_day) % days_per_year; }
    // Month counted from the start of the run, 0-based.
    static constexpr int absolute_month(int tick) { return tick / hours_per_day; }
    static constexpr bool is_year_start(int tick) { return tick % ticks_per_year == 0; }

    static constexpr int ticks_for_years(int years) { return years * ticks_per_year; }
    int horizon_years() const { return (horizon_ticks + ticks_per_year - 1) / ticks_per_year; }
};

static_assert(Clock::ticks_per_year == 288);
static_assert(Clock::year(5759) == 20);
static_assert(Clock::year(0) == 1);

} // namespace essim
