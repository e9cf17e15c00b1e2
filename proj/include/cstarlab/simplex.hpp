#ifndef CSTARLAB_SIMPLEX_HPP
#define CSTARLAB_SIMPLEX_HPP

#include <optional>
#include <variant>
#include <vector>

#include "cstarlab/markov.hpp"

namespace cstarlab::simplex {

enum class Measure { K, C, P };

// Barycentric row of a representing matrix. K and C rows are exact rationals;
// P rows are continuous and stored as doubles.
struct RepresentingRow {
    std::vector<Rational> exact;  // empty for P rows
    std::vector<double> real;

    bool is_exact() const { return !exact.empty(); }
    std::size_t size() const { return real.size(); }

    static RepresentingRow from_exact(std::vector<Rational> coords);
    static RepresentingRow from_real(std::vector<double> coords);
};

struct StandardInclusion {};
struct Collapse {
    RepresentingRow row;
};
using ConnectingStep = std::variant<StandardInclusion, Collapse>;

struct SimplexTower {
    std::vector<long> dims;  // simplex dimensions along the walk, all >= 0
    std::vector<ConnectingStep> steps;
    Measure measure = Measure::K;
    bool absorbed = false;
};

// Population-tree view of a case-C tower: one leaf splits per collapse event.
struct SplittingTree {
    struct Leaf {
        std::size_t created_at_event;  // collapse-event index at creation
    };
    std::vector<Leaf> leaves;
    std::size_t events = 0;
};

// Row for an up-step whose representing-matrix row index is n (collapse
// target is the (n-1)-simplex): K is the deterministic row (1/n,...,1/n), C a
// uniformly chosen vertex, P a flat Dirichlet sample on the face given by the
// triangular-schedule decomposition of step_index.
ConnectingStep sample_connecting_step(Measure measure, long n, std::size_t step_index, Rng& rng);

SimplexTower sample_tower(const markov::TransitionSpec& spec,
                          const markov::InitialDistribution& init, Measure measure,
                          std::size_t max_steps, Rng& rng);

// P(at most k extremal traces) = P(sup of the walk <= k-1). Exact rational.
Rational extremal_traces_at_most_prob(const markov::TransitionSpec& spec,
                                      const markov::InitialDistribution& init, long k);

SplittingTree splitting_tree(const SimplexTower& tower);

// A leaf whose creating split happened at least `depth` collapse events ago,
// if any: a finite-truncation proxy for an isolated boundary point.
std::optional<std::size_t> isolated_leaf_check(const SimplexTower& tower, std::size_t depth);

// Max over targets of the min l1 distance from any sampled row (zero-padded).
double poulsen_coverage_stat(const SimplexTower& tower,
                             const std::vector<std::vector<double>>& targets);

}  // namespace cstarlab::simplex

#endif
