#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace consensus {

// Undirected sensor-network graph with node positions on the unit square.
struct Graph {
    int m = 0;
    std::vector<std::array<double, 2>> positions;
    // Each edge stored once with i < j.
    std::vector<std::pair<int, int>> edges;

    std::vector<std::vector<int>> adjacency() const;
    std::vector<int> degrees() const;
    int max_degree() const;
};

// Connectivity radius used throughout the experiments: sqrt(log(m)/m) (natural log).
double default_rgg_radius(int m);

// Path 0-1-...-(m-1), nodes evenly spaced on the horizontal midline.
Graph path_graph(int m);

// Random geometric graph: m nodes uniform on [0,1)^2, edge iff distance < radius
// (strict inequality, compared on squared distances).  Deterministic in the seed.
Graph generate_rgg(int m, double radius, std::uint64_t seed);

bool is_connected(const Graph& g);

// Draws random geometric graphs with per-attempt seeds split_seed(base_seed, attempt)
// until one is connected.  attempts_out (optional) receives the number of rejected
// draws.  Throws std::runtime_error after max_attempts failures.
Graph sample_connected_rgg(int m, double radius, std::uint64_t base_seed,
                           int max_attempts = 10000, int* attempts_out = nullptr);

// JSON schema: {"m": int, "positions": [[x,y],...], "edges": [[i,j],...]} with i<j.
std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

}  // namespace consensus
