#pragma once

#include "essim/simulation.hpp"
#include "essim/timeseries.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace essim {

struct PriceStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

struct ValidationRow {
    int year = 0; // 1-based
    PriceStats simulated;
    PriceStats reference;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    std::optional<double> correlation; // Pearson over yearly means; empty if undefined
};

// Quartiles use linear interpolation between order statistics.
PriceStats price_stats(std::span<const double> values);

// Mean traded price of every model month; months without trade carry the
// previous month's value (or the first traded month's at the start).
std::vector<double> monthly_prices(const RunRecord& record);

std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Throws ConfigError when the reference does not cover whole years or is
// longer than the simulation.
ValidationReport compare_prices(std::span<const double> simulated_monthly,
                                std::span<const double> reference_monthly);

void write_validation_csv(std::ostream& out, const ValidationReport& report);
void write_monthly_csv(std::ostream& out, std::span<const double> monthly);

} // namespace essim
