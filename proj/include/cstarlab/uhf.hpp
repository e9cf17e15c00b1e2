#ifndef CSTARLAB_UHF_HPP
#define CSTARLAB_UHF_HPP

#include <cstdint>
#include <map>
#include <string>

#include "cstarlab/markov.hpp"

namespace cstarlab::uhf {

enum class Terminal { Absorbed, Truncated };

// Prime -> exponent map recording the tensor factors accumulated along a
// walk; states 0 and -1 contribute the trivial factor.
struct SupernaturalNumber {
    std::map<std::uint64_t, std::uint64_t> exponents;
    std::size_t trajectory_length = 0;
    Terminal terminal = Terminal::Truncated;

    // Sorted "p^e" list, e.g. "2^3 * 5^1".
    std::string to_string() const;
};

struct UhfSample {
    markov::WalkPath path;
    SupernaturalNumber number;
};

// m_{-1} = m_0 = 1, m_1 = 2, m_2 = 3, ... (n-th prime for n >= 1).
std::uint64_t prime_enumeration(long n);

SupernaturalNumber build_supernatural(const markov::WalkPath& path);

// Probability that the tensor product terminates in a finite matrix algebra.
markov::Prob prob_finite_dimensional(const markov::TransitionSpec& spec,
                                     const markov::InitialDistribution& init);

// Probability of a finite algebra M_N with every prime factor of N at most
// the k-th prime. Exact rational.
Rational prob_bounded_prime(const markov::TransitionSpec& spec,
                            const markov::InitialDistribution& init, long k);

enum class UhfType { UniversalQ, FiniteType, Inconclusive };

UhfType classify_uhf_type(const markov::TransitionSpec& spec);

}  // namespace cstarlab::uhf

#endif
