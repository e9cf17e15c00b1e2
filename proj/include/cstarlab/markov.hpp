#ifndef CSTARLAB_MARKOV_HPP
#define CSTARLAB_MARKOV_HPP

#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "cstarlab/rational.hpp"
#include "cstarlab/rng.hpp"

namespace cstarlab::markov {

// Birth and death rates with an eventually-geometric tail:
//   lambda(i) = lambda_prefix[i]            for i <  prefix length
//             = tail.base * tail.ratio^(i-t) for i >= t = prefix length
// The geometric tail keeps every series decision exact.
struct GeometricTail {
    Rational base;
    Rational ratio;
};

class RateSpec {
  public:
    RateSpec(std::vector<Rational> lambda_prefix, std::vector<Rational> mu_prefix,
             GeometricTail lambda_tail, GeometricTail mu_tail);

    // Constant rates lambda(i) = l, mu(i) = m for all i.
    static RateSpec constant(const Rational& l, const Rational& m);
    // lambda(i) = lb * lr^i, mu(i) = mb * mr^i.
    static RateSpec geometric(const Rational& lb, const Rational& lr, const Rational& mb,
                              const Rational& mr);

    Rational lambda(long i) const;
    Rational mu(long i) const;
    long tail_start() const { return tail_start_; }
    const GeometricTail& lambda_tail() const { return lambda_tail_; }
    const GeometricTail& mu_tail() const { return mu_tail_; }

  private:
    std::vector<Rational> lambda_prefix_, mu_prefix_;
    GeometricTail lambda_tail_, mu_tail_;
    long tail_start_;
};

struct ConstantPQ {
    Rational p;
};

// Finite list of explicit p_i (starting at i=1) followed by a constant tail.
struct TableFamily {
    std::vector<Rational> prefix;
    Rational tail_p;
};

struct FromRates {
    RateSpec rates;
};

enum class BoundaryKind { Reflecting, Absorbing };

// Jump chain of a birth-death process on {-1,0,1,2,...}: from i >= 1 the walk
// moves up with probability p_i and down with probability q_i = 1 - p_i. At 0
// it either reflects (p_0 = 1) or drops to the absorbing state -1 with
// probability q_0.
class TransitionSpec {
  public:
    using Family = std::variant<ConstantPQ, TableFamily, FromRates>;

    TransitionSpec(Family family, BoundaryKind boundary, Rational q0 = Rational(0));

    static TransitionSpec constant_reflecting(const Rational& p);
    static TransitionSpec constant_absorbing(const Rational& p, const Rational& q0);
    // Boundary read off from the rates: absorbing iff mu(0) > 0.
    static TransitionSpec from_rates(const RateSpec& rates);

    BoundaryKind boundary() const { return boundary_; }
    bool absorbing() const { return boundary_ == BoundaryKind::Absorbing; }
    Rational q0() const { return q0_; }

    // Up/down probabilities at state i >= 0.
    Rational p(long i) const;
    Rational q(long i) const { return Rational(1) - p(i); }

    // (start index, p) such that p(i) = p for every i >= start, when the
    // family admits one. FromRates has a constant tail iff the two geometric
    // ratios agree.
    std::optional<std::pair<long, Rational>> constant_tail() const;

    const Family& family() const { return family_; }

  private:
    Family family_;
    BoundaryKind boundary_;
    Rational q0_;
};

struct InitialDistribution {
    std::map<long, Rational> weights;  // finitely supported, sums to 1 exactly

    static InitialDistribution point_mass(long state);
    void validate() const;
    long sample(Rng& rng) const;
};

struct WalkPath {
    std::vector<long> states;
    bool absorbed = false;
    std::size_t truncated_at = 0;
};

enum class ChainKind { PositiveRecurrent, NullRecurrent, Transient, Inconclusive };

struct ChainClassification {
    ChainKind kind = ChainKind::Inconclusive;
    bool sum_a_diverges = false;  // a_n = prod p_{i-1}/q_i
    bool sum_b_diverges = false;  // b_n = prod q_i/p_i
    std::vector<double> partial_sums_a;
    std::vector<double> partial_sums_b;
};

// Probability known exactly or pinched into a certified interval.
struct Prob {
    Rational lower;
    Rational upper;
    bool exact = true;

    static Prob exactly(const Rational& v) { return {v, v, true}; }
    double midpoint() const { return to_double((lower + upper) / 2); }
    const Rational& value() const;  // throws unless exact
};

enum class AbsorptionMode { AbsorbAtMinusOne, NeverReachZero };

std::pair<Rational, Rational> jump_probabilities(const TransitionSpec& spec, long i);

WalkPath simulate_path(const TransitionSpec& spec, const InitialDistribution& init,
                       std::size_t max_steps, Rng& rng);

ChainClassification classify_chain(const TransitionSpec& spec);

Prob absorption_probability(const TransitionSpec& spec, long i, AbsorptionMode mode);

// h_{k,i}: probability that an absorbing chain started at i never exceeds k.
Rational max_not_exceeding_probability(const TransitionSpec& spec, long k, long i);

// Internal form of the above that also accepts k = 0.
Rational max_not_exceeding_unchecked(const TransitionSpec& spec, long k, long i);

enum class Criterion { Satisfied, Violated, Inconclusive };

// Karlin-McGregor uniqueness check: sum(alpha_n + beta_n) = infinity.
Criterion uniqueness_criterion(const RateSpec& rates, std::size_t cutoff);

// Exact hitting probability of `target` from `start` for the chain restricted
// to states [lo, hi]; every reachable neighbor of a non-target state must lie
// in the range. Independent linear-system oracle.
Rational finite_hitting_oracle(const TransitionSpec& spec, long lo, long hi,
                               const std::set<long>& target, long start);

// Monte Carlo absorption with the escape barrier: a trial is declared escaped
// once the residual absorption bound (q/p)^{pos+1} drops below eps (constant
// tail p > q only); when absorption is almost sure the cap resolves to
// absorbed, since the residual absorption probability is exactly 1.
bool mc_absorbed(const TransitionSpec& spec, long start, double eps, std::size_t cap, Rng& rng);

// Monte Carlo decision of the event {sup of the walk <= k} for an absorbing
// chain; decided at absorption or on first exceedance.
bool mc_sup_at_most(const TransitionSpec& spec, long start, long k, std::size_t cap, Rng& rng);

// Partial sums of c_n = prod_{j=0}^{n} q_j/p_j (exact, finite range).
Rational sum_c(const TransitionSpec& spec, long from, long to);
// Sum over n >= from; divergent sums reported via the flag.
struct SeriesSum {
    bool divergent = false;
    Rational lower;
    Rational upper;
    bool exact = true;
};
SeriesSum sum_c_tail(const TransitionSpec& spec, long from);

}  // namespace cstarlab::markov

#endif
