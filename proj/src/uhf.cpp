#include "cstarlab/uhf.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

namespace cstarlab::uhf {

namespace {

// Shared incremental prime cache; trial division is ample at desk scale.
std::uint64_t nth_prime(std::size_t n) {
    static std::vector<std::uint64_t> primes = {2, 3, 5, 7, 11, 13};
    while (primes.size() < n) {
        std::uint64_t c = primes.back() + 2;
        for (;; c += 2) {
            bool composite = false;
            for (std::uint64_t p : primes) {
                if (p * p > c) break;
                if (c % p == 0) {
                    composite = true;
                    break;
                }
            }
            if (!composite) break;
        }
        primes.push_back(c);
    }
    return primes[n - 1];
}

}  // namespace

std::uint64_t prime_enumeration(long n) {
    if (n < -1) throw std::invalid_argument("prime_enumeration: index must be >= -1");
    if (n <= 0) return 1;
    return nth_prime(static_cast<std::size_t>(n));
}

std::string SupernaturalNumber::to_string() const {
    if (exponents.empty()) return "1";
    std::ostringstream out;
    bool first = true;
    for (const auto& [p, e] : exponents) {
        if (!first) out << " * ";
        out << p << "^" << e;
        first = false;
    }
    return out.str();
}

SupernaturalNumber build_supernatural(const markov::WalkPath& path) {
    SupernaturalNumber sn;
    sn.trajectory_length = path.states.size();
    sn.terminal = path.absorbed ? Terminal::Absorbed : Terminal::Truncated;
    for (long state : path.states) {
        if (state <= 0) continue;
        ++sn.exponents[prime_enumeration(state)];
    }
    return sn;
}

markov::Prob prob_finite_dimensional(const markov::TransitionSpec& spec,
                                     const markov::InitialDistribution& init) {
    if (!spec.absorbing())
        throw std::invalid_argument("prob_finite_dimensional: requires absorbing boundary");
    init.validate();
    Rational lo(0), hi(0);
    bool exact = true;
    for (const auto& [state, w] : init.weights) {
        if (w == 0) continue;
        markov::Prob a =
            markov::absorption_probability(spec, state, markov::AbsorptionMode::AbsorbAtMinusOne);
        lo += w * a.lower;
        hi += w * a.upper;
        exact = exact && a.exact;
    }
    return {lo, hi, exact};
}

Rational prob_bounded_prime(const markov::TransitionSpec& spec,
                            const markov::InitialDistribution& init, long k) {
    if (!spec.absorbing())
        throw std::invalid_argument("prob_bounded_prime: requires absorbing boundary");
    if (k < 0) throw std::invalid_argument("prob_bounded_prime: k must be >= 0");
    init.validate();
    Rational total(0);
    for (const auto& [state, w] : init.weights) {
        if (w == 0) continue;
        total += w * markov::max_not_exceeding_unchecked(spec, k, state);
    }
    return total;
}

UhfType classify_uhf_type(const markov::TransitionSpec& spec) {
    if (spec.absorbing())
        throw std::invalid_argument("classify_uhf_type: requires reflecting boundary");
    markov::ChainClassification c = markov::classify_chain(spec);
    switch (c.kind) {
        case markov::ChainKind::PositiveRecurrent:
        case markov::ChainKind::NullRecurrent:
            return UhfType::UniversalQ;
        case markov::ChainKind::Transient:
            return UhfType::FiniteType;
        default:
            return UhfType::Inconclusive;
    }
}

}  // namespace cstarlab::uhf
