#include "essim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

namespace essim {

namespace {

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

std::string stats_cells(const PriceStats& s) {
    return fmt::format("{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}", s.mean, s.min, s.max, s.q1,
                       s.median, s.q3);
}

} // namespace

PriceStats price_stats(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("price_stats of an empty series");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    PriceStats s;
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    s.min = v.front();
    s.max = v.back();
    s.q1 = quantile(v, 0.25);
    s.median = quantile(v, 0.5);
    s.q3 = quantile(v, 0.75);
    return s;
}

std::vector<double> monthly_prices(const RunRecord& record) {
    const int months = static_cast<int>(record.ticks.size()) / Clock::hours_per_day;
    std::vector<std::optional<double>> raw(static_cast<std::size_t>(months));
    for (int m = 0; m < months; ++m) {
        double sum = 0.0;
        int n = 0;
        for (int h = 0; h < Clock::hours_per_day; ++h) {
            const auto& t = record.ticks[static_cast<std::size_t>(m * Clock::hours_per_day + h)];
            if (t.price) {
                sum += *t.price;
                ++n;
            }
        }
        if (n > 0) raw[static_cast<std::size_t>(m)] = sum / n;
    }
    std::vector<double> out(raw.size(), 0.0);
    auto first = std::find_if(raw.begin(), raw.end(), [](const auto& v) { return v.has_value(); });
    double carry = first == raw.end() ? 0.0 : **first;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i]) carry = *raw[i];
        out[i] = carry;
    }
    return out;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ValidationReport compare_prices(std::span<const double> simulated,
                                std::span<const double> reference) {
    const auto months = static_cast<std::size_t>(Clock::days_per_year);
    if (reference.empty() || reference.size() % months != 0) {
        throw ConfigError("reference", "must cover whole model years of 12 monthly values");
    }
    if (reference.size() > simulated.size()) {
        throw ConfigError("reference", "covers more years than the simulation horizon");
    }
    ValidationReport r;
    std::vector<double> sim_means, ref_means;
    for (std::size_t y = 0; y * months < reference.size(); ++y) {
        ValidationRow row;
        row.year = static_cast<int>(y) + 1;
        row.simulated = price_stats(simulated.subspan(y * months, months));
        row.reference = price_stats(reference.subspan(y * months, months));
        sim_means.push_back(row.simulated.mean);
        ref_means.push_back(row.reference.mean);
        r.rows.push_back(row);
    }
    r.correlation = pearson(sim_means, ref_means);
    return r;
}

void write_validation_csv(std::ostream& out, const ValidationReport& report) {
    out << "year,sim_mean,sim_min,sim_max,sim_q1,sim_median,sim_q3,"
           "ref_mean,ref_min,ref_max,ref_q1,ref_median,ref_q3,correlation\n";
    const std::string corr =
        report.correlation ? fmt::format("{:.6f}", *report.correlation) : std::string("NA");
    for (const auto& row : report.rows) {
        out << row.year << ',' << stats_cells(row.simulated) << ',' << stats_cells(row.reference)
            << ',' << corr << '\n';
    }
}

void write_monthly_csv(std::ostream& out, std::span<const double> monthly) {
    out << "month_index,value\n";
    for (std::size_t i = 0; i < monthly.size(); ++i) {
        out << fmt::format("{},{:.17g}\n", i, monthly[i]);
    }
}

} // namespace essim
