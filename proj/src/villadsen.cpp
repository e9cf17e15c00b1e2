#include "cstarlab/villadsen.hpp"

#include <cmath>
#include <stdexcept>

namespace cstarlab::villadsen {

namespace {
constexpr double kLn2 = 0.6931471805599453;
constexpr double kPiecewiseEps = 1e-8;
}  // namespace

void BetaWalkSpec::validate() const {
    Rational total = zero_weight;
    if (zero_weight < 0) throw std::invalid_argument("BetaWalkSpec: negative weight");
    for (const auto& [k, w] : power_weights) {
        if (w < 0) throw std::invalid_argument("BetaWalkSpec: negative weight");
        total += w;
    }
    if (total != 1) throw std::invalid_argument("BetaWalkSpec: weights must sum to 1");
    if (bit_budget < 1 || bit_budget > 53)
        throw std::invalid_argument("BetaWalkSpec: bit_budget must be in [1,53]");
}

BetaWalkSpec BetaWalkSpec::delta_power(double beta, int k, int bit_budget) {
    BetaWalkSpec spec;
    spec.beta = beta;
    spec.power_weights[k] = 1;
    spec.bit_budget = bit_budget;
    return spec;
}

double bit_probability(double beta, int n) {
    if (n < 1) throw std::invalid_argument("bit_probability: n must be >= 1");
    return 1.0 / (1.0 + std::exp(beta * std::ldexp(1.0, -n)));
}

double w_density(double beta, double x) {
    if (x < 0 || x > 1) throw std::domain_error("w_density: x must be in [0,1]");
    if (beta == 0) return 1.0;
    return beta * std::exp(beta * x) / std::expm1(beta);
}

double g_beta(double beta, double x) {
    if (x <= 0.5) return 1.0;
    if (x >= 1.0) return 0.0;
    if (beta == 0) return -std::log(x) / kLn2;
    // (x^{-beta/ln2} - 1)/(e^beta - 1); both factors via expm1 for stability.
    return std::expm1(-beta * std::log2(x)) / std::expm1(beta);
}

double ccdf_R(const BetaWalkSpec& spec, double r) {
    if (r <= 0) throw std::invalid_argument("ccdf_R: r must be > 0");
    spec.validate();
    double total = 0;
    for (const auto& [k, w] : spec.power_weights)
        total += to_double(w) * g_beta(spec.beta, r / std::ldexp(1.0, k));
    return total;
}

double expected_R(const BetaWalkSpec& spec) {
    spec.validate();
    double mass = 0;
    for (const auto& [k, w] : spec.power_weights) mass += to_double(w) * std::ldexp(1.0, k);
    double beta = spec.beta;
    double factor;
    if (std::abs(beta) < kPiecewiseEps) {
        factor = 1.0 / (2.0 * kLn2);  // 1/ln4
    } else if (std::abs(beta - kLn2) < kPiecewiseEps) {
        factor = kLn2;
    } else {
        factor = beta * (std::exp(beta) - 2.0) / (2.0 * std::expm1(beta) * (beta - kLn2));
    }
    return mass * factor;
}

RocSample sample_R(const BetaWalkSpec& spec, Rng& rng) {
    spec.validate();
    RocSample sample;
    // Draw W0 by exact CDF inversion over the finitely many atoms.
    {
        BigInt u = rng.u64();
        Rational uniform(u, BigInt(1) << 64);
        Rational cum = spec.zero_weight;
        bool chosen = uniform < cum && spec.zero_weight > 0;
        sample.w0 = 0;
        if (!chosen) {
            for (const auto& [k, w] : spec.power_weights) {
                cum += w;
                sample.w0 = std::ldexp(1.0, k);
                if (uniform < cum) break;
            }
        }
    }
    double w = 0;
    sample.bits.reserve(static_cast<std::size_t>(spec.bit_budget));
    for (int n = 1; n <= spec.bit_budget; ++n) {
        bool one = !rng.bernoulli(bit_probability(spec.beta, n));
        sample.bits.push_back(one);
        if (one) w += std::ldexp(1.0, -n);
    }
    sample.r = sample.w0 * std::exp2(-w);
    return sample;
}

Rational q_at(const QFamily& family, std::size_t i) {
    if (i < 1) throw std::invalid_argument("q_at: index must be >= 1");
    if (const auto* c = std::get_if<ConstantQ>(&family)) return c->q;
    if (std::get_if<OneMinusInverseSquare>(&family)) {
        if (i == 1) return Rational(1, 2);
        return Rational(1) - Rational(1, BigInt(i) * i);
    }
    const auto& t = std::get<QTable>(family);
    if (i - 1 < t.prefix.size()) return t.prefix[i - 1];
    return t.tail_q;
}

Rational zstable_probability(const QFamily& family, std::size_t cutoff) {
    // S = sum_{j>=0} p_j prod_{i>=j+1} q_i with p_0 = 1; result is 1 - S.
    if (const auto* c = std::get_if<ConstantQ>(&family)) {
        if (c->q <= 0 || c->q > 1) throw std::invalid_argument("zstable_probability: q in (0,1]");
        if (c->q < 1) return Rational(1);  // every tail product vanishes
        return Rational(0);                // q = 1: the j = 0 term alone is 1
    }
    if (std::get_if<OneMinusInverseSquare>(&family)) {
        // prod_{i>=m}(1 - 1/i^2) = (m-1)/m telescopes, and the j >= 2 terms
        // 1/(j(j+1)) telescope as well: S = 1/4 + 1/4 + 1/2 = 1 exactly.
        Rational s = Rational(1, 4) + Rational(1, 4);
        // sum_{j=2}^{cutoff} 1/(j(j+1)) = 1/2 - 1/(cutoff+1), tail exactly 1/(cutoff+1).
        s += Rational(1, 2);
        (void)cutoff;
        return Rational(1) - s;
    }
    const auto& t = std::get<QTable>(family);
    if (t.tail_q <= 0 || t.tail_q > 1)
        throw std::invalid_argument("zstable_probability: tail q in (0,1]");
    if (t.tail_q < 1) return Rational(1);  // tail products vanish
    // Constant tail q = 1: only indices up to the prefix contribute.
    std::size_t len = t.prefix.size();
    Rational s(0);
    for (std::size_t j = 0; j <= len; ++j) {
        Rational pj = j == 0 ? Rational(1) : Rational(1) - q_at(family, j);
        Rational prod(1);
        for (std::size_t i = j + 1; i <= len; ++i) prod *= q_at(family, i);
        s += pj * prod;
    }
    return Rational(1) - s;
}

bool tame_choice_in_window(const QFamily& family, std::size_t lo, std::size_t cutoff, Rng& rng) {
    bool hit = false;
    for (std::size_t i = 1; i <= cutoff; ++i) {
        bool tame = !rng.bernoulli(q_at(family, i));
        if (tame && i > lo) hit = true;
    }
    return hit;
}

}  // namespace cstarlab::villadsen
