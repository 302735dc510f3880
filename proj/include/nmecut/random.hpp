#pragma once

#include <cstdint>
#include <random>

namespace nmecut {

// Reproducible random stream keyed by (seed, stream_id). The engine and the
// seeding sequence are fully specified by the standard, and every derived
// distribution below is computed here, so draws match across platforms.
class RandomSource {
public:
    RandomSource(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Standard normal via Box-Muller.
    double normal();
    bool bernoulli(double p) { return uniform() < p; }
    // Sum of n Bernoulli(p) draws.
    std::uint64_t binomial(std::uint64_t n, double p);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace nmecut
