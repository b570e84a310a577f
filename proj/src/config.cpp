#include "essim/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace essim {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, technology_count> technology_names{
    "Nuclear", "Coal", "OCGT", "CCGT", "WindOffshore", "WindOnshore", "SolarPV"};

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& prefix) {
    if (!j.is_object()) throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected an object");
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) throw ConfigError(prefix + key, "unknown key");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& prefix) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        out = it->template get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(prefix + key, std::string("bad value: ") + e.what());
    }
}

} // namespace

std::string_view to_string(BusinessModel m) {
    return m == BusinessModel::WholesaleArbitrage ? "WholesaleArbitrage" : "ReserveCapacity";
}

std::string_view to_string(Technology t) { return technology_names[index_of(t)]; }

std::string_view to_string(Fuel f) {
    switch (f) {
    case Fuel::Uranium: return "Uranium";
    case Fuel::Coal: return "Coal";
    case Fuel::NaturalGas: return "NaturalGas";
    default: return "None";
    }
}

BusinessModel business_model_from_string(std::string_view s) {
    if (s == "WholesaleArbitrage") return BusinessModel::WholesaleArbitrage;
    if (s == "ReserveCapacity") return BusinessModel::ReserveCapacity;
    throw ConfigError("business_model", "unknown business model '" + std::string(s) + "'");
}

Technology technology_from_string(std::string_view s) {
    for (int i = 0; i < technology_count; ++i) {
        if (technology_names[i] == s) return all_technologies[i];
    }
    throw ConfigError("technology", "unknown technology '" + std::string(s) + "'");
}

Fuel fuel_from_string(std::string_view s) {
    for (Fuel f : {Fuel::None, Fuel::Uranium, Fuel::Coal, Fuel::NaturalGas}) {
        if (to_string(f) == s) return f;
    }
    throw ConfigError("fuel", "unknown fuel '" + std::string(s) + "'");
}

void Scenario::validate() const {
    require(ess_desirability_pct >= 0 && ess_desirability_pct <= 100, "ess_desirability_pct",
            "must lie in [0,100]");
    require(grid_ess_capacity_mw >= 0, "grid_ess_capacity_mw", "must be >= 0");
    require(max_ess_energy_rating_mwh >= 0, "max_ess_energy_rating_mwh", "must be >= 0");
    require(ess_power_capex_keur_per_mw >= 0, "ess_power_capex_keur_per_mw", "must be >= 0");
    require(ess_energy_capex_keur_per_mwh >= 0, "ess_energy_capex_keur_per_mwh", "must be >= 0");
    require(ess_roundtrip_eff_pct > 0 && ess_roundtrip_eff_pct <= 100, "ess_roundtrip_eff_pct",
            "must lie in (0,100]");
    require(res_growth_pct_per_y > -100, "res_growth_pct_per_y", "must be > -100");
    require(nonres_growth_pct_per_y > -100, "nonres_growth_pct_per_y", "must be > -100");
    require(co2_price_growth_pct_per_y > -100, "co2_price_growth_pct_per_y", "must be > -100");
    require(demand_growth_pct_per_y > -100, "demand_growth_pct_per_y", "must be > -100");
}

std::array<TechnologyParams, technology_count> EnvironmentConfig::default_technologies() {
    // Installed shares of 2016 expressed within the non-RES (83.8 %) and RES
    // (16.2 %) groups.
    constexpr double non_res = 83.8;
    constexpr double res = 16.2;
    std::array<TechnologyParams, technology_count> t{};
    t[index_of(Technology::Nuclear)] = {1.6 / non_res * 100, 0.33, 0.85, 8.0, 500, false};
    t[index_of(Technology::Coal)] = {18.2 / non_res * 100, 0.40, 0.86, 3.5, 500, true};
    t[index_of(Technology::OCGT)] = {32.0 / non_res * 100, 0.385, 0.80, 3.0, 500, true};
    t[index_of(Technology::CCGT)] = {32.0 / non_res * 100, 0.56, 0.84, 2.0, 500, true};
    t[index_of(Technology::WindOffshore)] = {1.1 / res * 100, 1.0, 0.95, 0.0, 100, false};
    t[index_of(Technology::WindOnshore)] = {10.5 / res * 100, 1.0, 0.95, 0.0, 100, false};
    t[index_of(Technology::SolarPV)] = {4.6 / res * 100, 1.0, 0.99, 0.0, 50, false};
    return t;
}

const FuelParams& EnvironmentConfig::fuel(Fuel f) const {
    switch (f) {
    case Fuel::Coal: return coal;
    case Fuel::NaturalGas: return gas;
    case Fuel::Uranium: return uranium;
    default: break;
    }
    static const FuelParams none{1.0, 0.0};
    return none;
}

void EnvironmentConfig::validate() const {
    require(n_producers >= 1, "n_producers", "must be >= 1");
    require(n_retailers >= 0, "n_retailers", "must be >= 0");
    require(n_large_consumers >= 0, "n_large_consumers", "must be >= 0");
    require(total_generation_capacity_gw >= 0, "total_generation_capacity_gw", "must be >= 0");
    require(initial_res_share_pct >= 0 && initial_res_share_pct <= 100, "initial_res_share_pct",
            "must lie in [0,100]");
    require(total_annual_load_gwh >= 0, "total_annual_load_gwh", "must be >= 0");
    require(large_load_share_pct >= 0 && large_load_share_pct <= 100, "large_load_share_pct",
            "must lie in [0,100]");
    require(flexible_load_pct >= 0 && flexible_load_pct <= 100, "flexible_load_pct",
            "must lie in [0,100]");
    require(interest_rate_pct_per_y > -100, "interest_rate_pct_per_y", "must be > -100");
    require(large_consumer_wtp_max >= large_consumer_wtp_min, "large_consumer_wtp_max",
            "must be >= large_consumer_wtp_min");
    require(ess_fixed_om_eur_per_mw_y >= 0, "ess_fixed_om_eur_per_mw_y", "must be >= 0");
    require(peak_start_hour >= 0 && peak_start_hour < 24, "peak_start_hour", "must lie in [0,23]");
    require(peak_end_hour >= peak_start_hour && peak_end_hour < 24, "peak_end_hour",
            "must lie in [peak_start_hour,23]");
    require(price_memory_ticks >= 1, "price_memory_ticks", "must be >= 1");
    require(post_clearing_outage_prob >= 0 && post_clearing_outage_prob <= 1,
            "post_clearing_outage_prob", "must lie in [0,1]");

    double res_sum = 0.0;
    double non_res_sum = 0.0;
    for (Technology t : all_technologies) {
        const auto& p = tech(t);
        const std::string name = "technologies." + std::string(to_string(t));
        require(p.share_pct >= 0, name + ".share_pct", "must be >= 0");
        require(p.efficiency > 0 && p.efficiency <= 1, name + ".efficiency", "must lie in (0,1]");
        require(p.reliability > 0 && p.reliability <= 1, name + ".reliability",
                "must lie in (0,1]");
        require(p.unit_size_mw > 0, name + ".unit_size_mw", "must be > 0");
        require(p.variable_om_eur_per_mwh >= 0, name + ".variable_om_eur_per_mwh", "must be >= 0");
        (is_renewable(t) ? res_sum : non_res_sum) += p.share_pct;
    }
    constexpr double tol = 1e-6;
    require(std::abs(res_sum - 100.0) <= tol, "technologies (RES shares)",
            "must sum to 100 %, got " + std::to_string(res_sum));
    require(std::abs(non_res_sum - 100.0) <= tol, "technologies (non-RES shares)",
            "must sum to 100 %, got " + std::to_string(non_res_sum));

    for (auto [name, f] : {std::pair{"coal", &coal}, {"gas", &gas}, {"uranium", &uranium}}) {
        require(f->energy_value > 0, std::string(name) + ".energy_value", "must be > 0");
        require(f->carbon_content >= 0, std::string(name) + ".carbon_content", "must be >= 0");
    }
}

void to_json(json& j, const Scenario& s) {
    j = json{{"business_model", to_string(s.business_model)},
             {"ess_desirability_pct", s.ess_desirability_pct},
             {"grid_ess_capacity_mw", s.grid_ess_capacity_mw},
             {"max_ess_energy_rating_mwh", s.max_ess_energy_rating_mwh},
             {"ess_power_capex_keur_per_mw", s.ess_power_capex_keur_per_mw},
             {"ess_energy_capex_keur_per_mwh", s.ess_energy_capex_keur_per_mwh},
             {"ess_roundtrip_eff_pct", s.ess_roundtrip_eff_pct},
             {"res_growth_pct_per_y", s.res_growth_pct_per_y},
             {"nonres_growth_pct_per_y", s.nonres_growth_pct_per_y},
             {"co2_price_growth_pct_per_y", s.co2_price_growth_pct_per_y},
             {"demand_growth_pct_per_y", s.demand_growth_pct_per_y}};
}

void from_json(const json& j, Scenario& s) {
    const std::string p = "scenario.";
    reject_unknown_keys(j,
                        {"business_model", "ess_desirability_pct", "grid_ess_capacity_mw",
                         "max_ess_energy_rating_mwh", "ess_power_capex_keur_per_mw",
                         "ess_energy_capex_keur_per_mwh", "ess_roundtrip_eff_pct",
                         "res_growth_pct_per_y", "nonres_growth_pct_per_y",
                         "co2_price_growth_pct_per_y", "demand_growth_pct_per_y"},
                        p);
    if (auto it = j.find("business_model"); it != j.end()) {
        if (!it->is_string()) throw ConfigError(p + "business_model", "expected a string");
        try {
            s.business_model = business_model_from_string(it->get<std::string>());
        } catch (const ConfigError& e) {
            throw ConfigError(p + "business_model", e.what());
        }
    }
    read(j, "ess_desirability_pct", s.ess_desirability_pct, p);
    read(j, "grid_ess_capacity_mw", s.grid_ess_capacity_mw, p);
    read(j, "max_ess_energy_rating_mwh", s.max_ess_energy_rating_mwh, p);
    read(j, "ess_power_capex_keur_per_mw", s.ess_power_capex_keur_per_mw, p);
    read(j, "ess_energy_capex_keur_per_mwh", s.ess_energy_capex_keur_per_mwh, p);
    read(j, "ess_roundtrip_eff_pct", s.ess_roundtrip_eff_pct, p);
    read(j, "res_growth_pct_per_y", s.res_growth_pct_per_y, p);
    read(j, "nonres_growth_pct_per_y", s.nonres_growth_pct_per_y, p);
    read(j, "co2_price_growth_pct_per_y", s.co2_price_growth_pct_per_y, p);
    read(j, "demand_growth_pct_per_y", s.demand_growth_pct_per_y, p);
}

namespace {

json tech_to_json(const TechnologyParams& t) {
    return json{{"share_pct", t.share_pct},
                {"efficiency", t.efficiency},
                {"reliability", t.reliability},
                {"variable_om_eur_per_mwh", t.variable_om_eur_per_mwh},
                {"unit_size_mw", t.unit_size_mw},
                {"flexible", t.flexible}};
}

void tech_from_json(const json& j, TechnologyParams& t, const std::string& p) {
    reject_unknown_keys(j,
                        {"share_pct", "efficiency", "reliability", "variable_om_eur_per_mwh",
                         "unit_size_mw", "flexible"},
                        p);
    read(j, "share_pct", t.share_pct, p);
    read(j, "efficiency", t.efficiency, p);
    read(j, "reliability", t.reliability, p);
    read(j, "variable_om_eur_per_mwh", t.variable_om_eur_per_mwh, p);
    read(j, "unit_size_mw", t.unit_size_mw, p);
    read(j, "flexible", t.flexible, p);
}

json fuel_to_json(const FuelParams& f) {
    return json{{"energy_value", f.energy_value}, {"carbon_content", f.carbon_content}};
}

void fuel_from_json(const json& j, FuelParams& f, const std::string& p) {
    reject_unknown_keys(j, {"energy_value", "carbon_content"}, p);
    read(j, "energy_value", f.energy_value, p);
    read(j, "carbon_content", f.carbon_content, p);
}

} // namespace

void to_json(json& j, const EnvironmentConfig& e) {
    json techs = json::object();
    for (Technology t : all_technologies) techs[std::string(to_string(t))] = tech_to_json(e.tech(t));
    j = json{{"n_producers", e.n_producers},
             {"n_retailers", e.n_retailers},
             {"n_large_consumers", e.n_large_consumers},
             {"total_generation_capacity_gw", e.total_generation_capacity_gw},
             {"initial_res_share_pct", e.initial_res_share_pct},
             {"total_annual_load_gwh", e.total_annual_load_gwh},
             {"large_load_share_pct", e.large_load_share_pct},
             {"flexible_load_pct", e.flexible_load_pct},
             {"interest_rate_pct_per_y", e.interest_rate_pct_per_y},
             {"carbon_pricing", e.carbon_pricing},
             {"co2_price_initial", e.co2_price_initial},
             {"fuel_price_growth_pct_per_y", e.fuel_price_growth_pct_per_y},
             {"large_consumer_wtp_min", e.large_consumer_wtp_min},
             {"large_consumer_wtp_max", e.large_consumer_wtp_max},
             {"small_consumer_wtp", e.small_consumer_wtp},
             {"ess_fixed_om_eur_per_mw_y", e.ess_fixed_om_eur_per_mw_y},
             {"peak_start_hour", e.peak_start_hour},
             {"peak_end_hour", e.peak_end_hour},
             {"bootstrap_price", e.bootstrap_price},
             {"price_memory_ticks", e.price_memory_ticks},
             {"post_clearing_outage_prob", e.post_clearing_outage_prob},
             {"series_seed", e.series_seed},
             {"technologies", techs},
             {"fuels",
              {{"coal", fuel_to_json(e.coal)},
               {"gas", fuel_to_json(e.gas)},
               {"uranium", fuel_to_json(e.uranium)}}},
             {"series",
              {{"coal_price", e.series.coal_price},
               {"gas_price", e.series.gas_price},
               {"uranium_price", e.series.uranium_price},
               {"wind", e.series.wind},
               {"sun", e.series.sun},
               {"load_profile", e.series.load_profile}}}};
}

void from_json(const json& j, EnvironmentConfig& e) {
    const std::string p = "environment.";
    reject_unknown_keys(
        j,
        {"n_producers", "n_retailers", "n_large_consumers", "total_generation_capacity_gw",
         "initial_res_share_pct", "total_annual_load_gwh", "large_load_share_pct",
         "flexible_load_pct", "interest_rate_pct_per_y", "carbon_pricing", "co2_price_initial",
         "fuel_price_growth_pct_per_y", "large_consumer_wtp_min", "large_consumer_wtp_max",
         "small_consumer_wtp", "ess_fixed_om_eur_per_mw_y", "peak_start_hour", "peak_end_hour",
         "bootstrap_price", "price_memory_ticks", "post_clearing_outage_prob", "series_seed",
         "technologies", "fuels", "series"},
        p);
    read(j, "n_producers", e.n_producers, p);
    read(j, "n_retailers", e.n_retailers, p);
    read(j, "n_large_consumers", e.n_large_consumers, p);
    read(j, "total_generation_capacity_gw", e.total_generation_capacity_gw, p);
    read(j, "initial_res_share_pct", e.initial_res_share_pct, p);
    read(j, "total_annual_load_gwh", e.total_annual_load_gwh, p);
    read(j, "large_load_share_pct", e.large_load_share_pct, p);
    read(j, "flexible_load_pct", e.flexible_load_pct, p);
    read(j, "interest_rate_pct_per_y", e.interest_rate_pct_per_y, p);
    read(j, "carbon_pricing", e.carbon_pricing, p);
    read(j, "co2_price_initial", e.co2_price_initial, p);
    read(j, "fuel_price_growth_pct_per_y", e.fuel_price_growth_pct_per_y, p);
    read(j, "large_consumer_wtp_min", e.large_consumer_wtp_min, p);
    read(j, "large_consumer_wtp_max", e.large_consumer_wtp_max, p);
    read(j, "small_consumer_wtp", e.small_consumer_wtp, p);
    read(j, "ess_fixed_om_eur_per_mw_y", e.ess_fixed_om_eur_per_mw_y, p);
    read(j, "peak_start_hour", e.peak_start_hour, p);
    read(j, "peak_end_hour", e.peak_end_hour, p);
    read(j, "bootstrap_price", e.bootstrap_price, p);
    read(j, "price_memory_ticks", e.price_memory_ticks, p);
    read(j, "post_clearing_outage_prob", e.post_clearing_outage_prob, p);
    read(j, "series_seed", e.series_seed, p);

    if (auto it = j.find("technologies"); it != j.end()) {
        reject_unknown_keys(*it,
                            {"Nuclear", "Coal", "OCGT", "CCGT", "WindOffshore", "WindOnshore",
                             "SolarPV"},
                            p + "technologies.");
        for (const auto& [name, value] : it->items()) {
            tech_from_json(value, e.tech(technology_from_string(name)),
                           p + "technologies." + name + ".");
        }
    }
    if (auto it = j.find("fuels"); it != j.end()) {
        reject_unknown_keys(*it, {"coal", "gas", "uranium"}, p + "fuels.");
        if (it->contains("coal")) fuel_from_json(it->at("coal"), e.coal, p + "fuels.coal.");
        if (it->contains("gas")) fuel_from_json(it->at("gas"), e.gas, p + "fuels.gas.");
        if (it->contains("uranium"))
            fuel_from_json(it->at("uranium"), e.uranium, p + "fuels.uranium.");
    }
    if (auto it = j.find("series"); it != j.end()) {
        const std::string sp = p + "series.";
        reject_unknown_keys(
            *it, {"coal_price", "gas_price", "uranium_price", "wind", "sun", "load_profile"}, sp);
        read(*it, "coal_price", e.series.coal_price, sp);
        read(*it, "gas_price", e.series.gas_price, sp);
        read(*it, "uranium_price", e.series.uranium_price, sp);
        read(*it, "wind", e.series.wind, sp);
        read(*it, "sun", e.series.sun, sp);
        read(*it, "load_profile", e.series.load_profile, sp);
    }
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError(assignment, "override must have the form key.path=value");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }

    json* node = &doc;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!node->is_object()) throw ConfigError(path, "path does not name an object member");
        if (i + 1 == parts.size()) {
            (*node)[parts[i]] = value;
        } else {
            node = &(*node)[parts[i]];
            if (node->is_null()) *node = json::object();
        }
    }
}

} // namespace essim
