#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace essim {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class BusinessModel { WholesaleArbitrage, ReserveCapacity };

enum class Technology { Nuclear, Coal, OCGT, CCGT, WindOffshore, WindOnshore, SolarPV };
inline constexpr int technology_count = 7;
inline constexpr std::array<Technology, technology_count> all_technologies{
    Technology::Nuclear,      Technology::Coal,        Technology::OCGT,   Technology::CCGT,
    Technology::WindOffshore, Technology::WindOnshore, Technology::SolarPV};

enum class Fuel { None, Uranium, Coal, NaturalGas };

enum class HourType { OffPeak, Peak };

enum class Role { Producer, Retailer, LargeConsumer, MarketOperator };

enum class LoadKind { Large, Small };

constexpr bool is_renewable(Technology t) {
    return t == Technology::WindOffshore || t == Technology::WindOnshore ||
           t == Technology::SolarPV;
}

constexpr bool is_wind(Technology t) {
    return t == Technology::WindOffshore || t == Technology::WindOnshore;
}

constexpr Fuel fuel_of(Technology t) {
    switch (t) {
    case Technology::Nuclear: return Fuel::Uranium;
    case Technology::Coal: return Fuel::Coal;
    case Technology::OCGT:
    case Technology::CCGT: return Fuel::NaturalGas;
    default: return Fuel::None;
    }
}

constexpr int index_of(Technology t) { return static_cast<int>(t); }

std::string_view to_string(BusinessModel m);
std::string_view to_string(Technology t);
std::string_view to_string(Fuel f);
BusinessModel business_model_from_string(std::string_view s);
Technology technology_from_string(std::string_view s);
Fuel fuel_from_string(std::string_view s);

// Reference to a physical entity in the world.
struct EntityRef {
    enum class Kind { Plant, Ess, Load };
    Kind kind = Kind::Plant;
    int index = -1;

    friend bool operator==(const EntityRef&, const EntityRef&) = default;
};

} // namespace essim
