#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cstarlab/uhf.hpp"

using namespace cstarlab;
using namespace cstarlab::uhf;

namespace {

markov::WalkPath make_path(std::vector<long> states, bool absorbed) {
    markov::WalkPath p;
    p.states = std::move(states);
    p.absorbed = absorbed;
    p.truncated_at = p.states.size();
    return p;
}

std::uint64_t sieve_nth_prime(long n) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t c = 2; static_cast<long>(primes.size()) < n; ++c) {
        bool ok = true;
        for (auto p : primes)
            if (c % p == 0) {
                ok = false;
                break;
            }
        if (ok) primes.push_back(c);
    }
    return primes.back();
}

}  // namespace

TEST_CASE("prime enumeration starts with two trivial terms") {
    CHECK(prime_enumeration(-1) == 1);
    CHECK(prime_enumeration(0) == 1);
    CHECK(prime_enumeration(1) == 2);
    CHECK(prime_enumeration(3) == 5);
    CHECK(prime_enumeration(10) == 29);
    for (long n = 1; n <= 50; ++n) CHECK(prime_enumeration(n) == sieve_nth_prime(n));
}

TEST_CASE("supernatural number from an explicit path") {
    auto s = build_supernatural(make_path({0, 1, 2, 1, 0, -1}, true));
    CHECK(s.exponents == std::map<std::uint64_t, std::uint64_t>{{2, 2}, {3, 1}});
    CHECK(s.terminal == Terminal::Absorbed);
    CHECK(s.to_string() == "2^2 * 3^1");
}

TEST_CASE("all-zero path yields the scalars") {
    auto s = build_supernatural(make_path({0, 0, 0, 0}, false));
    CHECK(s.exponents.empty());
    CHECK(s.terminal == Terminal::Truncated);
}

TEST_CASE("exponent of 2 counts visits to state 1 and exponents conserve steps") {
    auto spec = markov::TransitionSpec::constant_reflecting(Rational(1, 2));
    auto init = markov::InitialDistribution::point_mass(0);
    Rng rng(2024);
    auto path = markov::simulate_path(spec, init, 5000, rng);
    auto s = build_supernatural(path);
    std::uint64_t visits1 = 0, positive = 0;
    for (long st : path.states) {
        if (st == 1) ++visits1;
        if (st >= 1) ++positive;
    }
    CHECK(s.exponents.at(2) == visits1);
    std::uint64_t total = 0;
    for (const auto& [p, e] : s.exponents) total += e;
    CHECK(total == positive);
}

TEST_CASE("finite-dimensionality probability closed forms") {
    auto drift = markov::TransitionSpec::constant_absorbing(Rational(3, 5), Rational(2, 5));
    auto d0 = markov::InitialDistribution::point_mass(0);
    auto d1 = markov::InitialDistribution::point_mass(1);
    CHECK(prob_finite_dimensional(drift, d0).value() == Rational(2, 3));
    CHECK(prob_finite_dimensional(drift, d1).value() == Rational(4, 9));
    CHECK(prob_finite_dimensional(drift, d1).value() ==
          markov::absorption_probability(drift, 1, markov::AbsorptionMode::AbsorbAtMinusOne).value());

    auto symmetric = markov::TransitionSpec::constant_absorbing(Rational(1, 2), Rational(1, 2));
    CHECK(prob_finite_dimensional(symmetric, d0).value() == Rational(1));

    auto reflecting = markov::TransitionSpec::constant_reflecting(Rational(1, 2));
    CHECK_THROWS(prob_finite_dimensional(reflecting, d0));
}

TEST_CASE("bounded-prime probability closed forms") {
    auto symmetric = markov::TransitionSpec::constant_absorbing(Rational(1, 2), Rational(1, 2));
    CHECK(prob_bounded_prime(symmetric, markov::InitialDistribution::point_mass(0), 1) ==
          Rational(2, 3));
    CHECK(prob_bounded_prime(symmetric, markov::InitialDistribution::point_mass(2), 1) ==
          Rational(0));

    auto drift = markov::TransitionSpec::constant_absorbing(Rational(2, 3), Rational(1, 3));
    CHECK(prob_bounded_prime(drift, markov::InitialDistribution::point_mass(0), 2) ==
          markov::max_not_exceeding_probability(drift, 2, 0));
}

TEST_CASE("bounded-prime probability is monotone in k with the right limit") {
    auto drift = markov::TransitionSpec::constant_absorbing(Rational(3, 5), Rational(2, 5));
    auto init = markov::InitialDistribution::point_mass(0);
    Rational prev(0);
    for (long k = 0; k <= 64; ++k) {
        Rational cur = prob_bounded_prime(drift, init, k);
        CHECK(cur >= prev);
        prev = cur;
    }
    double limit = to_double(prob_finite_dimensional(drift, init).value());
    CHECK(std::abs(to_double(prev) - limit) < 1e-8);
}

TEST_CASE("mixed initial distributions combine linearly") {
    auto drift = markov::TransitionSpec::constant_absorbing(Rational(3, 5), Rational(2, 5));
    markov::InitialDistribution mix;
    mix.weights[0] = Rational(1, 2);
    mix.weights[1] = Rational(1, 2);
    CHECK(prob_finite_dimensional(drift, mix).value() ==
          Rational(1, 2) * Rational(2, 3) + Rational(1, 2) * Rational(4, 9));
}

TEST_CASE("UHF type from the chain classification") {
    CHECK(classify_uhf_type(markov::TransitionSpec::constant_reflecting(Rational(1, 2))) ==
          UhfType::UniversalQ);
    CHECK(classify_uhf_type(markov::TransitionSpec::constant_reflecting(Rational(3, 5))) ==
          UhfType::FiniteType);
    markov::TableFamily table{{Rational(1, 3), Rational(1, 2)}, Rational(7, 10)};
    CHECK(classify_uhf_type(markov::TransitionSpec(table, markov::BoundaryKind::Reflecting)) ==
          UhfType::FiniteType);
    CHECK_THROWS(classify_uhf_type(markov::TransitionSpec::constant_absorbing(Rational(1, 2),
                                                                              Rational(1, 2))));
}

TEST_CASE("Monte Carlo absorption frequency matches the closed form") {
    auto drift = markov::TransitionSpec::constant_absorbing(Rational(3, 5), Rational(2, 5));
    auto init = markov::InitialDistribution::point_mass(0);
    const std::size_t trials = 20000;
    std::size_t absorbed = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(5150, t));
        if (markov::mc_absorbed(drift, init.sample(rng), 1e-6, 100000, rng)) ++absorbed;
    }
    double emp = static_cast<double>(absorbed) / trials;
    double target = to_double(prob_finite_dimensional(drift, init).value());
    CHECK(std::abs(emp - target) <= 3 * std::sqrt(target * (1 - target) / trials));
}

TEST_CASE("symmetric reflecting walks keep revisiting state 1") {
    auto spec = markov::TransitionSpec::constant_reflecting(Rational(1, 2));
    auto init = markov::InitialDistribution::point_mass(0);
    auto median_exponent = [&](std::size_t steps, std::uint64_t salt) {
        std::vector<std::uint64_t> exps;
        std::uint64_t min_exp = UINT64_MAX;
        for (std::size_t t = 0; t < 500; ++t) {
            Rng rng(derive_seed(salt, t));
            auto s = build_supernatural(markov::simulate_path(spec, init, steps, rng));
            auto it = s.exponents.find(2);
            std::uint64_t e = it == s.exponents.end() ? 0 : it->second;
            exps.push_back(e);
            min_exp = std::min(min_exp, e);
        }
        std::sort(exps.begin(), exps.end());
        return std::pair{min_exp, exps[exps.size() / 2]};
    };
    auto [min_long, median_long] = median_exponent(10000, 8);
    auto [min_short, median_short] = median_exponent(1000, 9);
    CHECK(min_long >= 1);
    CHECK(median_long > median_short);
}
