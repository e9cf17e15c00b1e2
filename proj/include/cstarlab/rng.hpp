#ifndef CSTARLAB_RNG_HPP
#define CSTARLAB_RNG_HPP

#include <cstdint>
#include <random>

#include "cstarlab/rational.hpp"

namespace cstarlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed for trial t of a run with the given master seed. Fixed mixing function
// so reports are reproducible independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(trial * 0xD1B54A32D192ED03ULL + 1));
}

// Deterministic generator. All sampling goes through the helpers below, which
// use only the raw 64-bit stream of mt19937_64 (itself fixed by the standard),
// so identical seeds give identical draws on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t u64() { return eng_(); }

    // Uniform in [0,1) with 53 random bits.
    double real01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // Uniform in {0,...,n-1} by rejection.
    std::uint64_t index(std::uint64_t n) {
        std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = u64();
            if (r >= threshold) return r % n;
        }
    }

    // Bernoulli(p) for exact rational p; bias below 2^-64.
    bool bernoulli(const Rational& p) {
        if (p <= 0) return false;
        if (p >= 1) return true;
        BigInt threshold = (numerator(p) << 64) / denominator(p);
        return BigInt(u64()) < threshold;
    }

    bool bernoulli(double p) { return real01() < p; }

  private:
    std::mt19937_64 eng_;
};

}  // namespace cstarlab

#endif
