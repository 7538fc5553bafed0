#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "consensus/errors.hpp"
#include "consensus/graph.hpp"
#include "consensus/rng.hpp"

using namespace consensus;

namespace {

double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

TEST_CASE("default radius is sqrt(log m / m)") {
    CHECK(default_rgg_radius(40) == doctest::Approx(0.3036807309541526).epsilon(1e-12));
    CHECK(default_rgg_radius(2) == doctest::Approx(std::sqrt(std::log(2.0) / 2.0)));
    CHECK_THROWS_AS(default_rgg_radius(1), ParameterOutOfRange);
}

TEST_CASE("path graph layout") {
    const Graph g = path_graph(3);
    CHECK(g.m == 3);
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0] == std::pair<int, int>{0, 1});
    CHECK(g.edges[1] == std::pair<int, int>{1, 2});
    CHECK(g.degrees() == std::vector<int>{1, 2, 1});
    CHECK(g.max_degree() == 2);
    CHECK(is_connected(g));
    CHECK_THROWS_AS(path_graph(1), ParameterOutOfRange);
}

TEST_CASE("rgg positions lie in the unit square and edges respect the radius") {
    const Graph g = generate_rgg(25, 0.4, 99);
    REQUIRE(g.m == 25);
    REQUIRE(static_cast<int>(g.positions.size()) == 25);
    for (const auto& p : g.positions) {
        CHECK(p[0] >= 0.0);
        CHECK(p[0] < 1.0);
        CHECK(p[1] >= 0.0);
        CHECK(p[1] < 1.0);
    }
    std::set<std::pair<int, int>> edge_set(g.edges.begin(), g.edges.end());
    for (const auto& [i, j] : g.edges) CHECK(i < j);
    for (int i = 0; i < g.m; ++i)
        for (int j = i + 1; j < g.m; ++j)
            CHECK(edge_set.count({i, j}) == (dist(g.positions[i], g.positions[j]) < 0.4 ? 1 : 0));
}

TEST_CASE("rgg degenerate radii") {
    // radius 0: no pair is at distance < 0.
    CHECK(generate_rgg(5, 0.0, 1).edges.empty());
    // radius sqrt(2) on two nodes: the single edge is always present.
    for (std::uint64_t seed : {1ULL, 2ULL, 77ULL, 123456ULL}) {
        const Graph g = generate_rgg(2, std::sqrt(2.0), seed);
        REQUIRE(g.edges.size() == 1);
        CHECK(g.edges[0] == std::pair<int, int>{0, 1});
    }
}

TEST_CASE("rgg is deterministic in the seed") {
    const Graph a = generate_rgg(15, 0.35, 42);
    const Graph b = generate_rgg(15, 0.35, 42);
    const Graph c = generate_rgg(15, 0.35, 43);
    CHECK(a.positions == b.positions);
    CHECK(a.edges == b.edges);
    CHECK(a.positions != c.positions);
}

TEST_CASE("connectivity check") {
    CHECK(is_connected(path_graph(5)));
    Graph isolated;
    isolated.m = 2;
    isolated.positions = {{0.1, 0.1}, {0.9, 0.9}};
    CHECK_FALSE(is_connected(isolated));

    Graph two_components;
    two_components.m = 4;
    two_components.positions.resize(4, {0.5, 0.5});
    two_components.edges = {{0, 1}, {2, 3}};
    CHECK_FALSE(is_connected(two_components));
}

TEST_CASE("adjacency mirrors the edge list") {
    const Graph g = generate_rgg(12, 0.5, 7);
    const auto adj = g.adjacency();
    std::size_t total = 0;
    for (int i = 0; i < g.m; ++i) total += adj[i].size();
    CHECK(total == 2 * g.edges.size());
    for (const auto& [i, j] : g.edges) {
        CHECK(std::count(adj[i].begin(), adj[i].end(), j) == 1);
        CHECK(std::count(adj[j].begin(), adj[j].end(), i) == 1);
    }
}

TEST_CASE("connected sampling resamples until connected and reports rejections") {
    int rejected = -1;
    const Graph g = sample_connected_rgg(40, default_rgg_radius(40), 5, 10000, &rejected);
    CHECK(is_connected(g));
    CHECK(rejected >= 0);

    // Same base seed, same graph.
    const Graph h = sample_connected_rgg(40, default_rgg_radius(40), 5);
    CHECK(g.positions == h.positions);
    CHECK(g.edges == h.edges);

    // A hopeless radius exhausts the attempt budget.
    CHECK_THROWS_AS(sample_connected_rgg(10, 0.01, 1, 5), std::runtime_error);
}

TEST_CASE("graph json round trip") {
    const Graph g = sample_connected_rgg(10, 0.5, 11);
    const Graph back = graph_from_json(graph_to_json(g));
    CHECK(back.m == g.m);
    CHECK(back.edges == g.edges);
    REQUIRE(back.positions.size() == g.positions.size());
    for (std::size_t i = 0; i < g.positions.size(); ++i) {
        CHECK(back.positions[i][0] == g.positions[i][0]);
        CHECK(back.positions[i][1] == g.positions[i][1]);
    }
}

TEST_CASE("graph json rejects malformed input") {
    CHECK_THROWS(graph_from_json("not json"));
    CHECK_THROWS(graph_from_json(R"({"m": 2})"));
    // Edge with i >= j violates the storage convention.
    CHECK_THROWS(graph_from_json(
        R"({"m": 2, "positions": [[0.1,0.1],[0.2,0.2]], "edges": [[1,0]]})"));
    // Node index out of range.
    CHECK_THROWS(graph_from_json(
        R"({"m": 2, "positions": [[0.1,0.1],[0.2,0.2]], "edges": [[0,5]]})"));
}
