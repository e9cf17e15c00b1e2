#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "cstarlab/graphs.hpp"

using namespace cstarlab;
using namespace cstarlab::graphs;

namespace {

Multigraph two_triangles() {
    Multigraph g;
    g.n = 6;
    g.edges = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    return g;
}

std::vector<std::size_t> degrees(const Multigraph& g) {
    std::vector<std::size_t> d(g.n, 0);
    for (const auto& [a, b] : g.edges) {
        d[a]++;
        d[b]++;
    }
    return d;
}

}  // namespace

TEST_CASE("two vertices force a triple edge") {
    Rng rng(1);
    auto g = sample_regular_multigraph(2, 3, rng);
    CHECK(g.n == 2);
    REQUIRE(g.edges.size() == 3);
    for (const auto& e : g.edges) CHECK(e == std::pair<std::size_t, std::size_t>(0, 1));
    CHECK_THROWS(sample_regular_multigraph(3, 1, rng));
}

TEST_CASE("sampled graphs are r-regular") {
    for (std::size_t r : {1, 2, 3, 5}) {
        Rng rng(derive_seed(2, r));
        auto g = sample_regular_multigraph(12, r, rng);
        CHECK(g.edges.size() == 6 * r);
        for (auto d : degrees(g)) CHECK(d == r);
        for (const auto& [a, b] : g.edges) CHECK(a < b);
    }
}

TEST_CASE("single matchings on four vertices are uniform") {
    // The 3 perfect matchings on 4 vertices, keyed by the partner of vertex 0.
    std::map<std::size_t, std::size_t> counts;
    const std::size_t draws = 9000;
    for (std::size_t t = 0; t < draws; ++t) {
        Rng rng(derive_seed(3, t));
        auto g = sample_regular_multigraph(4, 1, rng);
        for (const auto& [a, b] : g.edges)
            if (a == 0) counts[b]++;
    }
    double expected = draws / 3.0;
    double stat = 0;
    for (std::size_t partner : {1, 2, 3}) {
        double diff = static_cast<double>(counts[partner]) - expected;
        stat += diff * diff / expected;
    }
    CHECK(stat < 13.8);  // chi-square, 2 dof, 0.999 quantile
}

TEST_CASE("doubling produces the symmetric adjacency matrix") {
    Multigraph g;
    g.n = 2;
    g.edges = {{0, 1}, {0, 1}, {0, 1}};
    auto d = double_to_digraph(g);
    CHECK(d.at(0, 1) == 3);
    CHECK(d.at(1, 0) == 3);
    CHECK(d.at(0, 0) == 0);
    CHECK(d.at(1, 1) == 0);

    for (std::size_t r : {1, 2, 4}) {
        Rng rng(derive_seed(4, r));
        auto h = sample_regular_multigraph(10, r, rng);
        auto dh = double_to_digraph(h);
        for (std::size_t i = 0; i < 10; ++i) {
            CHECK(dh.out_degree(i) == static_cast<std::int64_t>(r));
            CHECK(dh.at(i, i) == 0);
            for (std::size_t j = 0; j < 10; ++j) CHECK(dh.at(i, j) == dh.at(j, i));
        }
    }
}

TEST_CASE("predicates on the doubled triple edge") {
    Multigraph g;
    g.n = 2;
    g.edges = {{0, 1}, {0, 1}, {0, 1}};
    auto pred = kirchberg_predicates(double_to_digraph(g));
    CHECK_FALSE(pred.has_sink);
    CHECK_FALSE(pred.has_source);
    CHECK(pred.every_loop_has_exit);
    CHECK(pred.cofinal);
    CHECK(pred.purely_infinite);
    CHECK(pred.simple);
}

TEST_CASE("disconnected doubles are not simple") {
    auto pred = kirchberg_predicates(double_to_digraph(two_triangles()));
    CHECK(pred.purely_infinite);
    CHECK_FALSE(pred.cofinal);
    CHECK_FALSE(pred.simple);
}

TEST_CASE("a directed cycle has no loop exits") {
    Digraph d(5);
    for (std::size_t v = 0; v < 5; ++v) d.at(v, (v + 1) % 5) = 1;
    auto pred = kirchberg_predicates(d);
    CHECK_FALSE(pred.every_loop_has_exit);
    CHECK_FALSE(pred.purely_infinite);
    CHECK_FALSE(pred.simple);
    CHECK(pred.cofinal);
}

TEST_CASE("sinks and sources are detected") {
    Digraph d(3);
    d.at(0, 1) = 1;
    d.at(1, 2) = 1;
    auto pred = kirchberg_predicates(d);
    CHECK(pred.has_sink);
    CHECK(pred.has_source);
    CHECK_FALSE(pred.simple);
}

TEST_CASE("simplicity coincides with connectivity on doubled graphs") {
    std::size_t checked = 0;
    for (std::size_t t = 0; t < 1000; ++t) {
        Rng rng(derive_seed(5, t));
        std::size_t n = 4 + 2 * rng.index(9);
        std::size_t r = 1 + rng.index(3);
        auto g = sample_regular_multigraph(n, r, rng);
        CHECK(kirchberg_predicates(double_to_digraph(g)).simple == multigraph_connected(g));
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("doubled graphs with r >= 3 are purely infinite and mostly simple") {
    std::size_t simple = 0;
    const std::size_t trials = 300;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(6, t));
        auto g = sample_regular_multigraph(100, 3, rng);
        auto pred = kirchberg_predicates(double_to_digraph(g));
        CHECK(pred.purely_infinite);
        if (pred.simple) ++simple;
    }
    CHECK(static_cast<double>(simple) / trials >= 0.95);
}

TEST_CASE("serialization formats") {
    Multigraph g;
    g.n = 2;
    g.edges = {{0, 1}, {0, 1}};
    std::ostringstream edges;
    write_edge_list(edges, g);
    CHECK(edges.str() == "2 2\n0 1\n0 1\n");
    std::ostringstream adj;
    write_adjacency(adj, double_to_digraph(g));
    CHECK(adj.str() == "0 2\n2 0\n");
}
