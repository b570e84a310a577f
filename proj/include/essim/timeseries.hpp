#pragma once

#include "essim/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace essim {

// Exogenous per-tick inputs. Indexing wraps around, so a single baseline
// year can drive a multi-year run.
class Series {
public:
    Series() = default;
    explicit Series(std::vector<double> values) : values_(std::move(values)) {}

    double at(int tick) const {
        return values_.empty() ? 0.0 : values_[static_cast<std::size_t>(tick) % values_.size()];
    }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

struct BaselineSeries {
    Series coal_price;    // EUR/ton
    Series gas_price;     // EUR/MWh
    Series uranium_price; // EUR/kg
    Series wind;          // availability fraction
    Series sun;           // availability fraction
    Series load;          // fraction of yearly consumption; sums to 1/30 per model year
};

// Reads "tick_index,value" rows. A header row is optional. Rows must be
// sorted and contiguous from 0.
Series load_series_csv(const std::string& path);

// Rescales each model year of a profile so that it sums to 1/hour_scale_factor.
std::vector<double> normalize_load_profile(std::vector<double> fractions);

BaselineSeries synthetic_series(int ticks, std::uint64_t seed);

// CSV sources where configured, synthetic series otherwise. Percent inputs
// (wind, sun, load profile) are converted to fractions.
BaselineSeries load_baseline(const EnvironmentConfig& env, int ticks);

} // namespace essim
