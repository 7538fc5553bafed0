#include "consensus/graph.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "consensus/errors.hpp"
#include "consensus/rng.hpp"

namespace consensus {

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(m);
    for (auto [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    return adj;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(m, 0);
    for (auto [i, j] : edges) {
        ++deg[i];
        ++deg[j];
    }
    return deg;
}

int Graph::max_degree() const {
    int worst = 0;
    for (int d : degrees()) worst = std::max(worst, d);
    return worst;
}

double default_rgg_radius(int m) {
    if (m < 2) throw ParameterOutOfRange("default_rgg_radius needs m >= 2");
    return std::sqrt(std::log(static_cast<double>(m)) / m);
}

Graph path_graph(int m) {
    if (m < 2) throw ParameterOutOfRange("path_graph needs m >= 2");
    Graph g;
    g.m = m;
    g.positions.resize(m);
    for (int i = 0; i < m; ++i)
        g.positions[i] = {static_cast<double>(i) / (m - 1), 0.5};
    for (int i = 0; i + 1 < m; ++i) g.edges.emplace_back(i, i + 1);
    return g;
}

Graph generate_rgg(int m, double radius, std::uint64_t seed) {
    if (m < 1) throw ParameterOutOfRange("generate_rgg needs m >= 1");
    if (radius < 0.0) throw ParameterOutOfRange("generate_rgg needs radius >= 0");
    Graph g;
    g.m = m;
    g.positions.resize(m);
    Rng rng(seed);
    for (int i = 0; i < m; ++i) {
        g.positions[i][0] = rng.uniform();
        g.positions[i][1] = rng.uniform();
    }
    const double r2 = radius * radius;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double dx = g.positions[i][0] - g.positions[j][0];
            const double dy = g.positions[i][1] - g.positions[j][1];
            if (dx * dx + dy * dy < r2) g.edges.emplace_back(i, j);
        }
    }
    return g;
}

bool is_connected(const Graph& g) {
    if (g.m == 0) return false;
    const auto adj = g.adjacency();
    std::vector<char> seen(g.m, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int visited = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++visited;
                stack.push_back(v);
            }
        }
    }
    return visited == g.m;
}

Graph sample_connected_rgg(int m, double radius, std::uint64_t base_seed, int max_attempts,
                           int* attempts_out) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Graph g = generate_rgg(m, radius, split_seed(base_seed, attempt));
        if (is_connected(g)) {
            if (attempts_out) *attempts_out = attempt;
            return g;
        }
    }
    throw std::runtime_error("sample_connected_rgg: no connected draw in " +
                             std::to_string(max_attempts) + " attempts");
}

std::string graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["m"] = g.m;
    auto positions = nlohmann::json::array();
    for (const auto& p : g.positions) positions.push_back({p[0], p[1]});
    j["positions"] = positions;
    auto edges = nlohmann::json::array();
    for (auto [a, b] : g.edges) edges.push_back({a, b});
    j["edges"] = edges;
    return j.dump();
}

Graph graph_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Graph g;
    g.m = j.at("m").get<int>();
    if (g.m < 1) throw std::runtime_error("graph json: m must be >= 1");
    for (const auto& p : j.at("positions")) {
        if (p.size() != 2) throw std::runtime_error("graph json: positions must be [x,y] pairs");
        g.positions.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    if (static_cast<int>(g.positions.size()) != g.m)
        throw std::runtime_error("graph json: positions length != m");
    for (const auto& e : j.at("edges")) {
        if (e.size() != 2) throw std::runtime_error("graph json: edges must be [i,j] pairs");
        const int a = e[0].get<int>();
        const int b = e[1].get<int>();
        if (a < 0 || b < 0 || a >= g.m || b >= g.m || a >= b)
            throw std::runtime_error("graph json: edge endpoints must satisfy 0 <= i < j < m");
        g.edges.emplace_back(a, b);
    }
    return g;
}

}  // namespace consensus
