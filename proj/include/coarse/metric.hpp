#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coarse {

using Edge = std::pair<int, int>;

// Finite metric space with a validated distance matrix and a declared base
// point. Immutable after construction.
class FiniteMetricSpace {
public:
    // Absolute tolerance for the triangle inequality check.
    static constexpr double kTriangleTolerance = 1e-9;

    FiniteMetricSpace(std::vector<std::string> point_ids, std::vector<double> dist,
                      std::size_t base = 0);

    // Points labelled "0", "1", ... .
    static FiniteMetricSpace from_matrix(std::vector<double> dist, std::size_t base = 0);

    std::size_t size() const { return ids_.size(); }
    double operator()(std::size_t x, std::size_t y) const { return dist_[x * ids_.size() + y]; }

    const std::vector<std::string>& point_ids() const { return ids_; }
    const std::vector<double>& matrix() const { return dist_; }
    std::size_t base() const { return base_; }

    // ||x|| = d(x, base).
    double norm(std::size_t x) const { return (*this)(x, base_); }
    std::size_t index_of(const std::string& id) const;
    double diameter() const;

private:
    std::vector<std::string> ids_;
    std::vector<double> dist_;
    std::size_t base_;
};

// Simple undirected graph with a degree bound. Edges are stored normalized
// (i < j) and sorted.
class Graph {
public:
    Graph(int n, std::vector<Edge> edges, int degree_bound);

    int size() const { return n_; }
    int degree_bound() const { return d_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
    bool adjacent(int u, int v) const;
    bool is_regular() const;

    // BFS distances from src; -1 marks unreachable vertices.
    std::vector<int> bfs(int src) const;
    // First vertex pair (0, v) with v unreachable from 0.
    std::optional<Edge> separated_pair() const;
    bool connected() const { return !separated_pair().has_value(); }

private:
    int n_;
    int d_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
};

// Standard graphs used throughout the tests and the CLI.
Graph path_graph(int n);
Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph grid_graph(int rows, int cols);
// Two triangles joined by a single edge (n = 6).
Graph barbell_triangles();

// Shortest-path metric with unit edge lengths. Throws on disconnected input,
// naming a separated pair.
FiniteMetricSpace graph_metric(const Graph& g);

struct LipschitzResult {
    double constant = 0.0;
    std::size_t x = 0, y = 0;  // witnessing pair (meaningless when constant == 0)
};

// L(f) = max over distinct pairs of image_dist(x, y) / d(x, y).
LipschitzResult lipschitz_constant(const FiniteMetricSpace& domain,
                                   const std::function<double(std::size_t, std::size_t)>& image_dist);

// L(f) for a point map between two finite metric spaces.
LipschitzResult lipschitz_constant(const FiniteMetricSpace& domain, const FiniteMetricSpace& codomain,
                                   const std::vector<std::size_t>& images);

// Closed ball {x : d(x, center) <= r}.
std::vector<std::size_t> ball(const FiniteMetricSpace& space, std::size_t center, double r);
std::vector<std::size_t> ball(const FiniteMetricSpace& space, const std::string& center, double r);

struct BallGrowthResult {
    bool ok = true;
    double bound = 0.0;               // 2 d^k
    std::size_t largest_ball = 0;
    std::optional<int> violating_vertex;
};

// Checks |B_k(v)| <= 2 d^k for every vertex (d = degree bound >= 2).
BallGrowthResult ball_growth_check(const Graph& g, int k);

}  // namespace coarse
