#ifndef CSTARLAB_GRAPHS_HPP
#define CSTARLAB_GRAPHS_HPP

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "cstarlab/rng.hpp"

namespace cstarlab::graphs {

// Undirected multigraph on an even number of labelled vertices; in the
// matchings model every vertex ends up with degree exactly r and there are no
// self-loops.
struct Multigraph {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // unordered pairs, first < second
};

// Directed multigraph given by its integer adjacency matrix A(i,j) = number
// of edges i -> j.
class Digraph {
  public:
    explicit Digraph(std::size_t n) : n_(n), adj_(n * n, 0) {}

    std::size_t size() const { return n_; }
    std::int64_t& at(std::size_t i, std::size_t j) { return adj_[i * n_ + j]; }
    std::int64_t at(std::size_t i, std::size_t j) const { return adj_[i * n_ + j]; }

    std::int64_t out_degree(std::size_t v) const;
    std::int64_t in_degree(std::size_t v) const;

  private:
    std::size_t n_;
    std::vector<std::int64_t> adj_;
};

struct KirchbergPredicates {
    bool has_sink = false;
    bool has_source = false;
    bool every_loop_has_exit = false;
    bool cofinal = false;
    bool purely_infinite = false;
    bool simple = false;
};

// Union of r independent uniform perfect matchings on n vertices.
Multigraph sample_regular_multigraph(std::size_t n, std::size_t r, Rng& rng);

// Each undirected edge {i,j} becomes the pair of directed edges i->j, j->i.
Digraph double_to_digraph(const Multigraph& g);

KirchbergPredicates kirchberg_predicates(const Digraph& d);

// Connectivity of the underlying undirected multigraph (union-find); an
// independent check for the doubled-graph simplicity criterion.
bool multigraph_connected(const Multigraph& g);

void write_edge_list(std::ostream& out, const Multigraph& g);
void write_adjacency(std::ostream& out, const Digraph& d);

}  // namespace cstarlab::graphs

#endif
