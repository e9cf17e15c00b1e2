#include "cstarlab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cstarlab::simplex {

RepresentingRow RepresentingRow::from_exact(std::vector<Rational> coords) {
    RepresentingRow row;
    Rational sum(0);
    for (const auto& c : coords) {
        if (c < 0) throw std::invalid_argument("RepresentingRow: negative coordinate");
        sum += c;
    }
    if (sum != 1) throw std::invalid_argument("RepresentingRow: coordinates must sum to 1");
    row.real.reserve(coords.size());
    for (const auto& c : coords) row.real.push_back(to_double(c));
    row.exact = std::move(coords);
    return row;
}

RepresentingRow RepresentingRow::from_real(std::vector<double> coords) {
    RepresentingRow row;
    double sum = 0;
    for (double c : coords) {
        if (c < 0) throw std::invalid_argument("RepresentingRow: negative coordinate");
        sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("RepresentingRow: coordinates must sum to 1");
    row.real = std::move(coords);
    return row;
}

namespace {

// step_index = s_m + i with s_m = m(m+1)/2 and 1 <= i <= m+1; the face is
// spanned by the first m-i+2 vertices of the m-simplex.
std::pair<long, long> schedule_decompose(std::size_t step_index) {
    if (step_index == 0) throw std::invalid_argument("schedule_decompose: index must be >= 1");
    long m = 0;
    std::size_t s = 0;
    while (s + static_cast<std::size_t>(m) + 1 < step_index) {
        s += static_cast<std::size_t>(m) + 1;
        ++m;
    }
    long i = static_cast<long>(step_index - s);
    return {m, i};
}

// Flat Dirichlet on the standard (k-1)-simplex via sorted uniform spacings.
std::vector<double> flat_dirichlet(std::size_t k, Rng& rng) {
    if (k == 1) return {1.0};
    std::vector<double> cuts(k - 1);
    for (auto& c : cuts) c = rng.real01();
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> out(k);
    double prev = 0;
    for (std::size_t j = 0; j + 1 < k; ++j) {
        out[j] = cuts[j] - prev;
        prev = cuts[j];
    }
    out[k - 1] = 1.0 - prev;
    return out;
}

}  // namespace

ConnectingStep sample_connecting_step(Measure measure, long n, std::size_t step_index, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_connecting_step: row index must be >= 1");
    switch (measure) {
        case Measure::K: {
            std::vector<Rational> coords(static_cast<std::size_t>(n), Rational(1, n));
            return Collapse{RepresentingRow::from_exact(std::move(coords))};
        }
        case Measure::C: {
            std::vector<Rational> coords(static_cast<std::size_t>(n), Rational(0));
            coords[rng.index(static_cast<std::uint64_t>(n))] = 1;
            return Collapse{RepresentingRow::from_exact(std::move(coords))};
        }
        case Measure::P: {
            auto [m, i] = schedule_decompose(step_index);
            std::size_t face = static_cast<std::size_t>(m - i + 2);  // vertices e_0..e_{m-i+1}
            std::vector<double> coords(static_cast<std::size_t>(m) + 1, 0.0);
            auto point = flat_dirichlet(face, rng);
            std::copy(point.begin(), point.end(), coords.begin());
            return Collapse{RepresentingRow::from_real(std::move(coords))};
        }
    }
    throw std::logic_error("sample_connecting_step: unknown measure");
}

SimplexTower sample_tower(const markov::TransitionSpec& spec,
                          const markov::InitialDistribution& init, Measure measure,
                          std::size_t max_steps, Rng& rng) {
    if (max_steps < 1) throw std::invalid_argument("sample_tower: max_steps must be >= 1");
    markov::WalkPath path = markov::simulate_path(spec, init, max_steps, rng);
    SimplexTower tower;
    tower.measure = measure;
    tower.absorbed = path.absorbed;
    tower.dims.push_back(path.states[0]);
    std::size_t step_index = 0;
    for (std::size_t t = 1; t < path.states.size(); ++t) {
        long cur = path.states[t];
        if (cur == -1) break;  // the tower stabilises at absorption
        ++step_index;
        tower.dims.push_back(cur);
        if (cur > path.states[t - 1])
            tower.steps.push_back(sample_connecting_step(measure, cur, step_index, rng));
        else
            tower.steps.push_back(StandardInclusion{});
    }
    return tower;
}

Rational extremal_traces_at_most_prob(const markov::TransitionSpec& spec,
                                      const markov::InitialDistribution& init, long k) {
    if (k < 1) throw std::invalid_argument("extremal_traces_at_most_prob: k must be >= 1");
    if (!spec.absorbing())
        throw std::invalid_argument("extremal_traces_at_most_prob: requires absorbing boundary");
    init.validate();
    Rational total(0);
    for (const auto& [state, w] : init.weights) {
        if (w == 0) continue;
        total += w * markov::max_not_exceeding_unchecked(spec, k - 1, state);
    }
    return total;
}

SplittingTree splitting_tree(const SimplexTower& tower) {
    if (tower.measure != Measure::C)
        throw std::invalid_argument("splitting_tree: requires a measure-C tower");
    SplittingTree tree;
    tree.leaves.assign(static_cast<std::size_t>(tower.dims.empty() ? 1 : tower.dims[0] + 1),
                       {0});
    for (const auto& step : tower.steps) {
        const auto* collapse = std::get_if<Collapse>(&step);
        if (!collapse) continue;
        const auto& coords = collapse->row.exact;
        std::size_t v = 0;
        while (v < coords.size() && coords[v] != 1) ++v;
        if (v >= tree.leaves.size())
            throw std::logic_error("splitting_tree: vertex index out of range");
        ++tree.events;
        // Leaf v splits; both children count as fresh leaves. The new vertex
        // is appended so leaf slot i keeps tracking vertex i.
        tree.leaves[v].created_at_event = tree.events;
        tree.leaves.push_back({tree.events});
    }
    return tree;
}

std::optional<std::size_t> isolated_leaf_check(const SimplexTower& tower, std::size_t depth) {
    SplittingTree tree = splitting_tree(tower);
    if (tree.events < depth) return std::nullopt;
    for (std::size_t i = 0; i < tree.leaves.size(); ++i)
        if (tree.leaves[i].created_at_event + depth <= tree.events) return i;
    return std::nullopt;
}

double poulsen_coverage_stat(const SimplexTower& tower,
                             const std::vector<std::vector<double>>& targets) {
    std::vector<const std::vector<double>*> rows;
    for (const auto& step : tower.steps)
        if (const auto* collapse = std::get_if<Collapse>(&step)) rows.push_back(&collapse->row.real);
    if (rows.empty() || targets.empty()) return std::numeric_limits<double>::infinity();
    double worst = 0;
    for (const auto& target : targets) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto* row : rows) {
            std::size_t len = std::max(row->size(), target.size());
            double d = 0;
            for (std::size_t j = 0; j < len; ++j) {
                double a = j < row->size() ? (*row)[j] : 0.0;
                double b = j < target.size() ? target[j] : 0.0;
                d += std::abs(a - b);
            }
            best = std::min(best, d);
        }
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace cstarlab::simplex
