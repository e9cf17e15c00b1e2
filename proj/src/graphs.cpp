#include "cstarlab/graphs.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace cstarlab::graphs {

std::int64_t Digraph::out_degree(std::size_t v) const {
    std::int64_t d = 0;
    for (std::size_t j = 0; j < n_; ++j) d += at(v, j);
    return d;
}

std::int64_t Digraph::in_degree(std::size_t v) const {
    std::int64_t d = 0;
    for (std::size_t i = 0; i < n_; ++i) d += at(i, v);
    return d;
}

Multigraph sample_regular_multigraph(std::size_t n, std::size_t r, Rng& rng) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("sample_regular_multigraph: n must be even and >= 2");
    if (r < 1) throw std::invalid_argument("sample_regular_multigraph: r must be >= 1");
    Multigraph g;
    g.n = n;
    g.edges.reserve(r * n / 2);
    std::vector<std::size_t> perm(n);
    for (std::size_t round = 0; round < r; ++round) {
        std::iota(perm.begin(), perm.end(), 0);
        // Fisher-Yates with the deterministic index helper; pairing
        // consecutive entries of a uniform permutation is a uniform matching.
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.index(i + 1)]);
        for (std::size_t i = 0; i < n; i += 2) {
            auto [a, b] = std::minmax(perm[i], perm[i + 1]);
            g.edges.emplace_back(a, b);
        }
    }
    return g;
}

Digraph double_to_digraph(const Multigraph& g) {
    Digraph d(g.n);
    for (const auto& [a, b] : g.edges) {
        if (a == b) throw std::invalid_argument("double_to_digraph: self-loop in multigraph");
        ++d.at(a, b);
        ++d.at(b, a);
    }
    return d;
}

namespace {

// Tarjan strongly connected components; returns component id per vertex,
// ids in reverse topological order of the condensation.
std::pair<std::vector<std::size_t>, std::size_t> tarjan_scc(const Digraph& d) {
    const std::size_t n = d.size();
    std::vector<std::size_t> comp(n, SIZE_MAX), low(n), disc(n, SIZE_MAX), stack;
    std::vector<bool> on_stack(n, false);
    std::size_t counter = 0, ncomp = 0;

    struct Frame {
        std::size_t v;
        std::size_t next;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (disc[root] != SIZE_MAX) continue;
        std::vector<Frame> frames{{root, 0}};
        disc[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            bool descended = false;
            while (next < n) {
                std::size_t w = next++;
                if (d.at(v, w) == 0) continue;
                if (disc[w] == SIZE_MAX) {
                    disc[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], disc[w]);
            }
            if (descended) continue;
            if (low[v] == disc[v]) {
                for (;;) {
                    std::size_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                    if (w == v) break;
                }
                ++ncomp;
            }
            std::size_t finished = v;
            frames.pop_back();
            if (!frames.empty())
                low[frames.back().v] = std::min(low[frames.back().v], low[finished]);
        }
    }
    return {comp, ncomp};
}

// A loop with no exit exists iff following unique out-edges through
// out-degree-1 vertices closes a cycle.
bool exitless_loop_exists(const Digraph& d) {
    const std::size_t n = d.size();
    std::vector<long> succ(n, -1);
    for (std::size_t v = 0; v < n; ++v) {
        if (d.out_degree(v) != 1) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (d.at(v, j) == 1) succ[v] = static_cast<long>(j);
    }
    std::vector<int> color(n, 0);  // 0 unvisited, 1 on path, 2 done
    for (std::size_t v = 0; v < n; ++v) {
        if (color[v] != 0 || succ[v] < 0) continue;
        std::size_t u = v;
        std::vector<std::size_t> path;
        while (succ[u] >= 0 && color[u] == 0) {
            color[u] = 1;
            path.push_back(u);
            u = static_cast<std::size_t>(succ[u]);
        }
        if (color[u] == 1) return true;  // closed within the current chain
        for (std::size_t w : path) color[w] = 2;
    }
    return false;
}

}  // namespace

KirchbergPredicates kirchberg_predicates(const Digraph& d) {
    const std::size_t n = d.size();
    KirchbergPredicates out;
    for (std::size_t v = 0; v < n; ++v) {
        if (d.out_degree(v) == 0) out.has_sink = true;
        if (d.in_degree(v) == 0) out.has_source = true;
    }
    out.every_loop_has_exit = !exitless_loop_exists(d);

    auto [comp, ncomp] = tarjan_scc(d);
    std::vector<bool> has_cycle(ncomp, false);
    std::vector<std::size_t> comp_size(ncomp, 0);
    for (std::size_t v = 0; v < n; ++v) {
        ++comp_size[comp[v]];
        if (d.at(v, v) > 0) has_cycle[comp[v]] = true;
    }
    for (std::size_t c = 0; c < ncomp; ++c)
        if (comp_size[c] > 1) has_cycle[c] = true;

    // Condensation edges; component ids from Tarjan are in reverse
    // topological order, so successors always have smaller ids.
    std::vector<std::vector<bool>> reaches(ncomp, std::vector<bool>(ncomp, false));
    for (std::size_t c = 0; c < ncomp; ++c) reaches[c][c] = true;
    std::vector<std::vector<std::size_t>> cedges(ncomp);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w)
            if (d.at(v, w) > 0 && comp[v] != comp[w]) cedges[comp[v]].push_back(comp[w]);
    for (std::size_t c = 0; c < ncomp; ++c) {
        for (std::size_t succ : cedges[c])
            for (std::size_t t = 0; t < ncomp; ++t)
                if (reaches[succ][t]) reaches[c][t] = true;
    }

    bool all_connect_to_loop = true, all_cofinal = true;
    for (std::size_t v = 0; v < n; ++v) {
        bool to_loop = false;
        for (std::size_t t = 0; t < ncomp; ++t) {
            if (!reaches[comp[v]][t]) {
                if (has_cycle[t]) all_cofinal = false;  // misses a cycle component
                continue;
            }
            if (has_cycle[t]) to_loop = true;
        }
        if (!to_loop) all_connect_to_loop = false;
    }

    out.cofinal = all_cofinal;
    out.purely_infinite = all_connect_to_loop && out.every_loop_has_exit;
    out.simple = !out.has_sink && out.every_loop_has_exit && out.cofinal;
    return out;
}

bool multigraph_connected(const Multigraph& g) {
    if (g.n == 0) return true;
    std::vector<std::size_t> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [a, b] : g.edges) parent[find(a)] = find(b);
    std::size_t root = find(0);
    for (std::size_t v = 1; v < g.n; ++v)
        if (find(v) != root) return false;
    return true;
}

void write_edge_list(std::ostream& out, const Multigraph& g) {
    out << g.n << " " << g.edges.size() << "\n";
    for (const auto& [a, b] : g.edges) out << a << " " << b << "\n";
}

void write_adjacency(std::ostream& out, const Digraph& d) {
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.size(); ++j) out << (j ? " " : "") << d.at(i, j);
        out << "\n";
    }
}

}  // namespace cstarlab::graphs
