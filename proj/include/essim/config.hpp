#pragma once

#include "essim/types.hpp"

#include <array>
#include <cstdint>
#include "json.hpp"
#include <string>

namespace essim {

// One point of the experiment grid.
struct Scenario {
    BusinessModel business_model = BusinessModel::WholesaleArbitrage;
    double ess_desirability_pct = 0.0;
    double grid_ess_capacity_mw = 10.0;
    double max_ess_energy_rating_mwh = 10.0;
    double ess_power_capex_keur_per_mw = 100.0;
    double ess_energy_capex_keur_per_mwh = 100.0;
    double ess_roundtrip_eff_pct = 85.0;
    double res_growth_pct_per_y = 0.0;
    double nonres_growth_pct_per_y = 0.0;
    double co2_price_growth_pct_per_y = 0.0;
    double demand_growth_pct_per_y = 0.0;

    void validate() const;
};

struct TechnologyParams {
    double share_pct = 0.0;       // of the RES or the non-RES group
    double efficiency = 1.0;      // thermal efficiency, 1 for RES
    double reliability = 1.0;
    double variable_om_eur_per_mwh = 0.0;
    double unit_size_mw = 100.0;
    bool flexible = false;
};

struct FuelParams {
    double energy_value = 1.0;    // MWh_fuel per price unit (ton, kg, MWh)
    double carbon_content = 0.0;  // tCO2 per MWh_fuel
};

// CSV inputs (tick_index,value). Empty path selects the synthetic generator.
struct SeriesSources {
    std::string coal_price;    // EUR/ton
    std::string gas_price;     // EUR/MWh
    std::string uranium_price; // EUR/kg
    std::string wind;          // % availability
    std::string sun;           // % availability
    std::string load_profile;  // % of annual consumption per hour
};

struct EnvironmentConfig {
    int n_producers = 5;
    int n_retailers = 8;
    int n_large_consumers = 16;
    double total_generation_capacity_gw = 31.1;
    double initial_res_share_pct = 16.2;
    double total_annual_load_gwh = 100000.0;
    double large_load_share_pct = 50.0;
    double flexible_load_pct = 0.0;
    double interest_rate_pct_per_y = 5.0;
    bool carbon_pricing = true;
    double co2_price_initial = 25.0;
    double fuel_price_growth_pct_per_y = 0.0;
    double large_consumer_wtp_min = 0.0;
    double large_consumer_wtp_max = 150.0;
    double small_consumer_wtp = 200.0;
    double ess_fixed_om_eur_per_mw_y = 0.0;
    int peak_start_hour = 9;
    int peak_end_hour = 20; // inclusive
    double bootstrap_price = 40.0;
    int price_memory_ticks = 24;
    double post_clearing_outage_prob = 0.0;
    std::uint64_t series_seed = 2016;

    std::array<TechnologyParams, technology_count> technologies = default_technologies();
    FuelParams coal{8.14, 0.34};
    FuelParams gas{1.0, 0.20};
    FuelParams uranium{150.0, 0.0};

    SeriesSources series;

    const TechnologyParams& tech(Technology t) const { return technologies[index_of(t)]; }
    TechnologyParams& tech(Technology t) { return technologies[index_of(t)]; }
    const FuelParams& fuel(Fuel f) const;

    HourType hour_type(int hour_of_day) const {
        return hour_of_day >= peak_start_hour && hour_of_day <= peak_end_hour ? HourType::Peak
                                                                              : HourType::OffPeak;
    }

    void validate() const;

    static std::array<TechnologyParams, technology_count> default_technologies();
};

void to_json(nlohmann::json& j, const Scenario& s);
void from_json(const nlohmann::json& j, Scenario& s);
void to_json(nlohmann::json& j, const EnvironmentConfig& e);
void from_json(const nlohmann::json& j, EnvironmentConfig& e);

// Applies "a.b.c=value" to a JSON document. The value is parsed as JSON when
// possible and taken as a string otherwise. Unknown paths are rejected.
void apply_override(nlohmann::json& doc, const std::string& assignment);

} // namespace essim
