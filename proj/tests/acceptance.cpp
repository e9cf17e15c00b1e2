// Acceptance checks: one line per criterion, nonzero exit if any fails.
// Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "cstarlab/graphs.hpp"
#include "cstarlab/harness.hpp"
#include "cstarlab/ktheory.hpp"
#include "cstarlab/markov.hpp"
#include "cstarlab/rng.hpp"
#include "cstarlab/simplex.hpp"
#include "cstarlab/uhf.hpp"
#include "cstarlab/villadsen.hpp"

using namespace cstarlab;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s  criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double to_d(const Rational& r) { return static_cast<double>(r); }

// Three-sigma binomial band around an exact probability p at sample size n.
bool within_3sigma(double freq, double p, std::uint64_t n) {
    double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return std::abs(freq - p) <= 3.0 * sigma + 1e-15;
}

char buf[512];

// 1. Gambler's-ruin absorption frequency vs (q/p)^{i+1}.
void criterion1() {
    auto t0 = Clock::now();
    auto chain = markov::TransitionSpec::constant_absorbing(Rational(3, 5), Rational(2, 5));
    const std::uint64_t trials = 100000;
    Rng rng(101);
    std::uint64_t absorbed = 0;
    for (std::uint64_t t = 0; t < trials; ++t)
        absorbed += markov::mc_absorbed(chain, 1, 1e-6, 100000, rng);
    double freq = double(absorbed) / trials;
    double exact = to_d(
        markov::absorption_probability(chain, 1, markov::AbsorptionMode::AbsorbAtMinusOne)
            .value());
    double runtime = seconds_since(t0);
    bool pass = std::abs(exact - 4.0 / 9.0) < 1e-15 && std::abs(freq - exact) <= 0.0047 &&
                runtime < 10.0;
    std::snprintf(buf, sizeof buf,
                  "absorption p=3/5 start=1: freq %.4f vs 4/9=%.4f (tol 0.0047), %.1fs",
                  freq, exact, runtime);
    report(1, pass, buf);
}

// 2. Running-max law (k+1-i)/(k+2): rational equality with the finite
// lattice oracle, plus Monte Carlo at each (i,k).
void criterion2() {
    auto chain = markov::TransitionSpec::constant_absorbing(Rational(1, 2), Rational(1, 2));
    bool exact_ok = true, mc_ok = true;
    Rng rng(202);
    for (long k = 1; k <= 4; ++k) {
        for (long i = 0; i <= k; ++i) {
            Rational formula = markov::max_not_exceeding_probability(chain, k, i);
            Rational expect = Rational(k + 1 - i) / Rational(k + 2);
            Rational oracle =
                Rational(1) - markov::finite_hitting_oracle(chain, -1, k + 1, {k + 1}, i);
            exact_ok = exact_ok && formula == expect && formula == oracle;

            const std::uint64_t trials = 100000;
            std::uint64_t hits = 0;
            for (std::uint64_t t = 0; t < trials; ++t)
                hits += markov::mc_sup_at_most(chain, i, k, 100000000, rng);
            mc_ok = mc_ok && within_3sigma(double(hits) / trials, to_d(formula), trials);
        }
    }
    std::snprintf(buf, sizeof buf,
                  "running-max law on k<=4 grid: oracle equality %s, Monte Carlo 3-sigma %s",
                  exact_ok ? "exact" : "BROKEN", mc_ok ? "ok" : "BROKEN");
    report(2, exact_ok && mc_ok, buf);
}

// 3. Supernatural-number probabilities vs simulation over a (p, pi, k) grid.
void criterion3() {
    bool ok = true;
    Rng rng(303);
    const std::uint64_t trials = 100000;
    for (const Rational& p : {Rational(1, 2), Rational(3, 5)}) {
        auto chain = markov::TransitionSpec::constant_absorbing(p, Rational(1) - p);
        for (long start : {0L, 1L}) {
            auto init = markov::InitialDistribution::point_mass(start);

            double pfd = uhf::prob_finite_dimensional(chain, init).midpoint();
            std::uint64_t finite = 0;
            for (std::uint64_t t = 0; t < trials; ++t)
                finite += markov::mc_absorbed(chain, start, 1e-6, 100000, rng);
            ok = ok && within_3sigma(double(finite) / trials, pfd, trials);

            for (long k = 0; k <= 3; ++k) {
                double pbp = to_d(uhf::prob_bounded_prime(chain, init, k));
                std::uint64_t bounded = 0;
                for (std::uint64_t t = 0; t < trials; ++t)
                    bounded += markov::mc_sup_at_most(chain, start, k, 100000000, rng);
                ok = ok && within_3sigma(double(bounded) / trials, pbp, trials);
            }
        }
    }
    std::snprintf(buf, sizeof buf,
                  "matrix-algebra tower probabilities vs simulation, 20-cell grid: %s",
                  ok ? "all within 3 sigma" : "BROKEN");
    report(3, ok, buf);
}

// 4. Extremal-trace count probabilities 1/2, 2/3, 3/4 vs simulation.
void criterion4() {
    auto chain = markov::TransitionSpec::constant_absorbing(Rational(1, 2), Rational(1, 2));
    auto init = markov::InitialDistribution::point_mass(0);
    bool ok = true;
    Rng rng(404);
    const std::uint64_t trials = 100000;
    for (long k = 1; k <= 3; ++k) {
        Rational exact = simplex::extremal_traces_at_most_prob(chain, init, k);
        ok = ok && exact == Rational(k, k + 1);
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < trials; ++t)
            hits += markov::mc_sup_at_most(chain, 0, k - 1, 100000000, rng);
        ok = ok && within_3sigma(double(hits) / trials, to_d(exact), trials);
    }
    std::snprintf(buf, sizeof buf,
                  "extremal trace counts k=1..3 vs 1/2, 2/3, 3/4: %s",
                  ok ? "all within 3 sigma" : "BROKEN");
    report(4, ok, buf);
}

// 5. Radius-of-comparison sampling vs the analytic distribution and means.
void criterion5() {
    auto t0 = Clock::now();
    bool ok = true;
    Rng rng(505);
    const std::size_t samples = 1000000;
    double worst_ks = 0, worst_mean_err = 0;
    for (double beta : {0.0, std::log(2.0), -1.0}) {
        auto spec = villadsen::BetaWalkSpec::delta_power(beta, 0);
        std::vector<double> rs;
        rs.reserve(samples);
        double sum = 0;
        for (std::size_t t = 0; t < samples; ++t) {
            double r = villadsen::sample_R(spec, rng).r;
            rs.push_back(r);
            sum += r;
        }
        double ks = harness::ks_distance(
            rs, [&](double r) { return 1.0 - villadsen::ccdf_R(spec, r); });
        double mean_err = std::abs(sum / samples - villadsen::expected_R(spec));
        worst_ks = std::max(worst_ks, ks);
        worst_mean_err = std::max(worst_mean_err, mean_err);
        ok = ok && ks <= 0.005 && mean_err <= 0.002;
    }
    double runtime = seconds_since(t0);
    ok = ok && runtime < 30.0;
    std::snprintf(buf, sizeof buf,
                  "radius distribution beta in {0, ln2, -1}: worst KS %.4f (<=0.005), "
                  "worst mean error %.4f (<=0.002), %.1fs",
                  worst_ks, worst_mean_err, runtime);
    report(5, ok, buf);
}

// 6. Tensor-factor absorption probability: exact closed forms and truncated
// simulation for the constant-1/2 and 1-1/i^2 choice families.
void criterion6() {
    using villadsen::ConstantQ;
    using villadsen::OneMinusInverseSquare;
    bool exact_ok = villadsen::zstable_probability(ConstantQ{Rational(1, 2)}, 1000) == 1 &&
                    villadsen::zstable_probability(OneMinusInverseSquare{}, 1000) == 0;
    Rng rng(606);
    const std::uint64_t trials = 2000;
    std::uint64_t const_hits = 0, sq_hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const_hits += villadsen::tame_choice_in_window(ConstantQ{Rational(1, 2)}, 500, 1000, rng);
        sq_hits += villadsen::tame_choice_in_window(OneMinusInverseSquare{}, 500, 1000, rng);
    }
    double f_const = double(const_hits) / trials, f_sq = double(sq_hits) / trials;
    bool mc_ok = f_const >= 0.999 && f_sq <= 0.01;
    std::snprintf(buf, sizeof buf,
                  "tame-choice probabilities: exact 1 and 0 %s; window frequency "
                  "%.4f (>=0.999) and %.4f (<=0.01)",
                  exact_ok ? "ok" : "BROKEN", f_const, f_sq);
    report(6, exact_ok && mc_ok, buf);
}

// 7. K-groups of the doubled triple edge and Smith-form oracle equality.
void criterion7() {
    graphs::Multigraph triple;
    triple.n = 2;
    triple.edges = {{0, 1}, {0, 1}, {0, 1}};
    auto kg = ktheory::k_groups(graphs::double_to_digraph(triple));
    bool kg_ok = kg.k0.free_rank == 0 && kg.k0.invariant_factors.size() == 1 &&
                 kg.k0.invariant_factors[0] == 8 && kg.k1_rank == 0;

    Rng rng(707);
    bool snf_ok = true;
    for (int t = 0; t < 200; ++t) {
        std::size_t rows = 1 + rng.index(5), cols = 1 + rng.index(5);
        ktheory::IntMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m.at(i, j) = static_cast<long>(rng.index(11)) - 5;
        auto snf = ktheory::smith_normal_form(m);
        auto oracle = ktheory::minors_gcd_oracle(m);
        snf_ok = snf_ok && snf.invariant_factors == oracle.invariant_factors &&
                 snf.nullity == oracle.nullity;
    }
    std::snprintf(buf, sizeof buf,
                  "K0(doubled triple edge) = %s, K1 rank %zu; Smith form vs minors oracle "
                  "on 200 random matrices: %s",
                  kg.k0.to_string().c_str(), kg.k1_rank, snf_ok ? "exact" : "BROKEN");
    report(7, kg_ok && snf_ok, buf);
}

// 8. Limiting 3-Sylow distribution of coker(A^t - I) on doubled random
// 3-regular graphs, n=100, 2000 samples.
void criterion8() {
    auto t0 = Clock::now();
    Rng rng(808);
    const std::size_t n = 100, r = 3, samples = 2000;
    std::size_t trivial = 0, z3 = 0;
    for (std::size_t t = 0; t < samples; ++t) {
        auto g = graphs::sample_regular_multigraph(n, r, rng);
        auto kg = ktheory::k_groups(graphs::double_to_digraph(g));
        auto lambda = ktheory::sylow_partition(kg.k0, 3);
        if (lambda.empty()) ++trivial;
        if (lambda == std::vector<unsigned>{1}) ++z3;
    }
    double f_trivial = double(trivial) / samples, f_z3 = double(z3) / samples;
    double runtime = seconds_since(t0);
    bool pass = std::abs(f_trivial - 0.639) <= 0.03 && std::abs(f_z3 - 0.213) <= 0.03 &&
                runtime < 300.0;
    std::snprintf(buf, sizeof buf,
                  "3-Sylow of K0, n=100 r=3: trivial %.3f vs 0.639, Z/3 %.3f vs 0.213 "
                  "(tol 0.03), %.0fs",
                  f_trivial, f_z3, runtime);
    report(8, pass, buf);
}

// 9. Doubled 3-regular graphs are a.a.s. simple and always purely infinite.
void criterion9() {
    Rng rng(909);
    const std::size_t samples = 1000;
    std::size_t simple = 0, purely_infinite = 0;
    for (std::size_t t = 0; t < samples; ++t) {
        auto g = graphs::sample_regular_multigraph(100, 3, rng);
        auto pred = graphs::kirchberg_predicates(graphs::double_to_digraph(g));
        simple += pred.simple;
        purely_infinite += pred.purely_infinite;
    }
    double f_simple = double(simple) / samples;
    bool pass = f_simple >= 0.95 && purely_infinite == samples;
    std::snprintf(buf, sizeof buf,
                  "doubled G(100,3): simple fraction %.3f (>=0.95), purely infinite "
                  "%zu/%zu (=100%%)",
                  f_simple, purely_infinite, samples);
    report(9, pass, buf);
}

// 10. Reports are byte-identical across thread counts for a fixed seed.
void criterion10() {
    harness::json cfg{{"construction", "markov_absorption"},
                      {"params", {{"p", "3/5"}, {"start", 1}}},
                      {"trials", 50000},
                      {"master_seed", 424242}};
    auto spec = harness::ExperimentSpec::from_json(cfg);
    std::string first = harness::run_experiment(spec, 1).to_json().dump();
    bool pass = true;
    for (unsigned threads : {2u, 4u, 8u})
        pass = pass && harness::run_experiment(spec, threads).to_json().dump() == first;
    std::snprintf(buf, sizeof buf,
                  "same master seed across 1/2/4/8 threads: %s",
                  pass ? "byte-identical reports" : "REPORTS DIFFER");
    report(10, pass, buf);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", failures);
    return 1;
}
