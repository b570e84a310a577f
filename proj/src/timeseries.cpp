#include "essim/timeseries.hpp"

#include "essim/clock.hpp"
#include "essim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace essim {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Calibration ranges of the baseline inputs.
constexpr double coal_min = 53.97, coal_max = 132.37;
constexpr double gas_min = 13.68, gas_max = 23.63;
constexpr double uranium_min = 43.55, uranium_max = 95.56;
constexpr double wind_min = 0.47, wind_max = 1.0;
constexpr double load_min_pct = 0.0053, load_max_pct = 0.0229;

std::vector<double> scaled(const Series& s, double factor) {
    std::vector<double> v = s.values();
    for (double& x : v) x *= factor;
    return v;
}

// Monthly price path: slow multi-year cycle plus monthly noise, clipped to range.
std::vector<double> fuel_path(int ticks, Rng& rng, double lo, double hi, double phase) {
    const double mid = 0.5 * (lo + hi);
    const double amp = 0.5 * (hi - lo);
    std::vector<double> out(static_cast<std::size_t>(ticks));
    double month_value = mid;
    for (int t = 0; t < ticks; ++t) {
        if (t % Clock::hours_per_day == 0) {
            const double m = Clock::absolute_month(t);
            const double cycle = std::sin(two_pi * m / 36.0 + phase);
            month_value = std::clamp(mid + amp * (0.6 * cycle + 0.15 * rng.normal()), lo, hi);
        }
        out[static_cast<std::size_t>(t)] = month_value;
    }
    return out;
}

} // namespace

Series load_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open time-series file");
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ConfigError(path, "line " + std::to_string(line_no) + ": expected two columns");
        }
        const std::string idx_text = line.substr(0, comma);
        const std::string val_text = line.substr(comma + 1);
        std::size_t used = 0;
        long idx = 0;
        double value = 0.0;
        try {
            idx = std::stol(idx_text, &used);
            if (used != idx_text.size()) throw std::invalid_argument("trailing");
            value = std::stod(val_text, &used);
            if (used != val_text.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            if (line_no == 1 && values.empty()) continue; // header
            throw ConfigError(path, "line " + std::to_string(line_no) + ": not numeric");
        }
        if (idx != static_cast<long>(values.size())) {
            throw ConfigError(path, "line " + std::to_string(line_no) +
                                        ": tick_index must be contiguous from 0");
        }
        if (!std::isfinite(value)) {
            throw ConfigError(path, "line " + std::to_string(line_no) + ": non-finite value");
        }
        values.push_back(value);
    }
    if (values.empty()) throw ConfigError(path, "time-series file has no rows");
    return Series(std::move(values));
}

std::vector<double> normalize_load_profile(std::vector<double> fractions) {
    const double target = 1.0 / Clock::hour_scale_factor;
    for (std::size_t start = 0; start < fractions.size(); start += Clock::ticks_per_year) {
        const std::size_t end = std::min(fractions.size(), start + Clock::ticks_per_year);
        double sum = 0.0;
        for (std::size_t i = start; i < end; ++i) sum += fractions[i];
        if (sum <= 0.0) throw ConfigError("load_profile", "model year with zero total load");
        // A trailing partial year keeps the per-tick scale of a full year.
        const double full = static_cast<double>(end - start) / Clock::ticks_per_year;
        const double k = target * full / sum;
        for (std::size_t i = start; i < end; ++i) fractions[i] *= k;
    }
    return fractions;
}

BaselineSeries synthetic_series(int ticks, std::uint64_t seed) {
    Rng weather(stream_seed(seed, Stream::Weather));
    Rng fuel(stream_seed(seed, Stream::Fuel));
    Rng load(stream_seed(seed, Stream::Load));
    const auto n = static_cast<std::size_t>(ticks);

    std::vector<double> wind(n), sun(n), profile(n);
    double wind_anomaly = 0.0;
    double cloud_anomaly = 0.0;
    const double mean_load_pct = 100.0 / (Clock::ticks_per_year * Clock::hour_scale_factor);
    for (int t = 0; t < ticks; ++t) {
        const double h = Clock::hour_of_day(t);
        const double m = Clock::month(t);
        const auto i = static_cast<std::size_t>(t);

        // Windier winters, AR(1) hourly weather.
        wind_anomaly = 0.9 * wind_anomaly + 0.05 * weather.normal();
        wind[i] = std::clamp(0.735 + 0.12 * std::cos(two_pi * m / 12.0) + wind_anomaly, wind_min,
                             wind_max);

        // Day length peaks in June (month 5).
        const double day_length = 12.0 + 4.0 * std::cos(two_pi * (m - 5.5) / 12.0);
        const double sunrise = 12.5 - 0.5 * day_length;
        const double x = (h - sunrise) / day_length;
        const double elevation = (x > 0.0 && x < 1.0) ? std::sin(std::numbers::pi * x) : 0.0;
        cloud_anomaly = 0.8 * cloud_anomaly + 0.08 * weather.normal();
        const double clear_sky = std::clamp(0.85 + cloud_anomaly, 0.2, 1.0);
        sun[i] = std::clamp(elevation * clear_sky, 0.0, 1.0);

        // Afternoon peak, winter peak, small noise.
        const double daily = 1.0 + 0.22 * std::cos(two_pi * (h - 15.0) / 24.0);
        const double seasonal = 1.0 + 0.08 * std::cos(two_pi * m / 12.0);
        const double noise = 1.0 + 0.02 * load.normal();
        profile[i] = std::clamp(mean_load_pct * daily * seasonal * noise, load_min_pct,
                                load_max_pct) /
                     100.0;
    }

    BaselineSeries s;
    s.coal_price = Series(fuel_path(ticks, fuel, coal_min, coal_max, 0.0));
    s.gas_price = Series(fuel_path(ticks, fuel, gas_min, gas_max, 1.0));
    s.uranium_price = Series(fuel_path(ticks, fuel, uranium_min, uranium_max, 2.0));
    s.wind = Series(std::move(wind));
    s.sun = Series(std::move(sun));
    s.load = Series(normalize_load_profile(std::move(profile)));
    return s;
}

BaselineSeries load_baseline(const EnvironmentConfig& env, int ticks) {
    BaselineSeries s = synthetic_series(ticks, env.series_seed);
    const auto& src = env.series;
    if (!src.coal_price.empty()) s.coal_price = load_series_csv(src.coal_price);
    if (!src.gas_price.empty()) s.gas_price = load_series_csv(src.gas_price);
    if (!src.uranium_price.empty()) s.uranium_price = load_series_csv(src.uranium_price);
    if (!src.wind.empty()) s.wind = Series(scaled(load_series_csv(src.wind), 0.01));
    if (!src.sun.empty()) s.sun = Series(scaled(load_series_csv(src.sun), 0.01));
    if (!src.load_profile.empty()) {
        s.load = Series(normalize_load_profile(scaled(load_series_csv(src.load_profile), 0.01)));
    }
    for (double w : s.wind.values()) {
        if (w < 0.0 || w > 1.0) throw ConfigError("series.wind", "availability outside 0-100 %");
    }
    for (double w : s.sun.values()) {
        if (w < 0.0 || w > 1.0) throw ConfigError("series.sun", "availability outside 0-100 %");
    }
    return s;
}

} // namespace essim
