#pragma once

#include <cstdint>
#include <random>

namespace essim {

// SplitMix64 finalizer. Bit-exact on every platform.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of one (scenario, replication) pair:
//   mix64(mix64(mix64(base_seed) ^ scenario_id) ^ rep)
constexpr std::uint64_t pair_seed(std::uint64_t base_seed, std::uint64_t scenario_id,
                                  std::uint64_t rep) {
    return mix64(mix64(mix64(base_seed) ^ scenario_id) ^ rep);
}

// Named sub-streams of one run seed.
enum class Stream : std::uint64_t {
    Availability = 1,
    Outage = 2,
    Weather = 3,
    Fuel = 4,
    Load = 5,
};

constexpr std::uint64_t stream_seed(std::uint64_t seed, Stream s) {
    return mix64(seed ^ (static_cast<std::uint64_t>(s) * 0xd1b54a32d192ed03ULL));
}

// mt19937_64 is fully specified by the standard; the conversion to [0,1) is
// done by hand because std::uniform_real_distribution is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }
    // Approximately standard normal (Irwin-Hall sum of 12 uniforms).
    double normal() {
        double s = 0.0;
        for (int i = 0; i < 12; ++i) s += uniform();
        return s - 6.0;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace essim
