#ifndef CSTARLAB_VILLADSEN_HPP
#define CSTARLAB_VILLADSEN_HPP

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "cstarlab/rational.hpp"
#include "cstarlab/rng.hpp"

namespace cstarlab::villadsen {

// Radius-of-comparison walk: R = W0 * 2^{-W} with W = 0.W1W2... a random
// binary expansion whose bit probabilities decay like a logistic in beta.
struct BetaWalkSpec {
    double beta = 0.0;
    // Initial distribution over {0} and powers of two, keyed by the exponent:
    // weight of W0 = 2^k under key k; the key for W0 = 0 is `zero_weight`.
    std::map<int, Rational> power_weights;
    Rational zero_weight = Rational(0);
    int bit_budget = 53;

    void validate() const;
    static BetaWalkSpec delta_power(double beta, int k, int bit_budget = 53);
};

struct RocSample {
    double w0 = 0;
    std::vector<bool> bits;
    double r = 0;
};

// p_n = 1/(1 + e^{beta/2^n}), the probability of bit n being 0.
double bit_probability(double beta, int n);

// Density of W on [0,1]: beta e^{beta x}/(e^beta - 1), or 1 at beta = 0.
double w_density(double beta, double x);

// Piecewise complementary CDF of 2^{-W}.
double g_beta(double beta, double x);

// P(R >= r) for r > 0.
double ccdf_R(const BetaWalkSpec& spec, double r);

// E(R); a spec with finite support always yields a finite value.
double expected_R(const BetaWalkSpec& spec);

RocSample sample_R(const BetaWalkSpec& spec, Rng& rng);

// q-sequence families for the tame/exotic choice process.
struct ConstantQ {
    Rational q;
};
struct OneMinusInverseSquare {};  // q_1 = 1/2, q_i = 1 - 1/i^2 for i >= 2
struct QTable {
    std::vector<Rational> prefix;  // q_1, q_2, ...
    Rational tail_q;
};
using QFamily = std::variant<ConstantQ, OneMinusInverseSquare, QTable>;

// Probability of making the tame choice infinitely often:
// 1 - sum_j p_j prod_{i >= j+1} q_i with p_0 = 1. Exact for all families here.
Rational zstable_probability(const QFamily& family, std::size_t cutoff);

// One tame/exotic trial truncated at `cutoff` choices; reports whether any
// tame choice landed in the window (lo, cutoff].
bool tame_choice_in_window(const QFamily& family, std::size_t lo, std::size_t cutoff, Rng& rng);

Rational q_at(const QFamily& family, std::size_t i);

}  // namespace cstarlab::villadsen

#endif
