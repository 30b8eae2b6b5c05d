#include "coarse/metric.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "coarse/error.hpp"

namespace coarse {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> point_ids, std::vector<double> dist,
                                     std::size_t base)
    : ids_(std::move(point_ids)), dist_(std::move(dist)), base_(base) {
    const std::size_t n = ids_.size();
    if (n == 0) throw Error(ErrorKind::InvalidInput, "metric space has no points");
    if (dist_.size() != n * n) {
        throw Error(ErrorKind::InvalidInput, "distance matrix is not " + std::to_string(n) + "x" +
                                                 std::to_string(n));
    }
    if (base_ >= n) throw Error(ErrorKind::InvalidInput, "base point out of range");
    {
        std::vector<std::string> sorted = ids_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error(ErrorKind::InvalidInput, "duplicate point id");
    }
    auto at = [&](std::size_t i, std::size_t j) { return dist_[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        if (at(i, i) != 0.0) throw Error(ErrorKind::InvalidInput, "non-zero diagonal at " + ids_[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!std::isfinite(at(i, j)) || at(i, j) <= 0.0)
                throw Error(ErrorKind::InvalidInput,
                            "non-positive distance between " + ids_[i] + " and " + ids_[j]);
            if (at(i, j) != at(j, i))
                throw Error(ErrorKind::InvalidInput, "asymmetric distance between " + ids_[i] +
                                                         " and " + ids_[j]);
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double dik = at(i, k);
            for (std::size_t j = i + 1; j < n; ++j) {
                if (at(i, j) > dik + at(k, j) + kTriangleTolerance) {
                    std::ostringstream os;
                    os << "triangle inequality fails: d(" << ids_[i] << "," << ids_[j] << ") > d("
                       << ids_[i] << "," << ids_[k] << ") + d(" << ids_[k] << "," << ids_[j] << ")";
                    throw Error(ErrorKind::InvalidInput, os.str());
                }
            }
        }
    }
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<double> dist, std::size_t base) {
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(dist.size()))));
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
    return FiniteMetricSpace(std::move(ids), std::move(dist), base);
}

std::size_t FiniteMetricSpace::index_of(const std::string& id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) throw Error(ErrorKind::InvalidInput, "unknown point id '" + id + "'");
    return static_cast<std::size_t>(it - ids_.begin());
}

double FiniteMetricSpace::diameter() const {
    return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

Graph::Graph(int n, std::vector<Edge> edges, int degree_bound) : n_(n), d_(degree_bound) {
    if (n <= 0) throw Error(ErrorKind::InvalidInput, "graph needs at least one vertex");
    for (auto& e : edges) {
        if (e.first == e.second)
            throw Error(ErrorKind::InvalidInput, "self-loop at vertex " + std::to_string(e.first));
        if (e.first < 0 || e.second < 0 || e.first >= n || e.second >= n)
            throw Error(ErrorKind::InvalidInput, "edge endpoint out of range");
        if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
        throw Error(ErrorKind::InvalidInput, "duplicate edge " + std::to_string(dup->first) + "-" +
                                                 std::to_string(dup->second));
    }
    edges_ = std::move(edges);
    adj_.assign(static_cast<std::size_t>(n), {});
    for (const auto& [u, v] : edges_) {
        adj_[static_cast<std::size_t>(u)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (int v = 0; v < n; ++v) {
        auto& nb = adj_[static_cast<std::size_t>(v)];
        std::sort(nb.begin(), nb.end());
        if (static_cast<int>(nb.size()) > d_)
            throw Error(ErrorKind::InvalidInput, "vertex " + std::to_string(v) + " has degree " +
                                                     std::to_string(nb.size()) + " > bound " +
                                                     std::to_string(d_));
    }
}

bool Graph::adjacent(int u, int v) const {
    const auto& nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::is_regular() const {
    for (int v = 0; v < n_; ++v)
        if (degree(v) != d_) return false;
    return true;
}

std::vector<int> Graph::bfs(int src) const {
    std::vector<int> dist(static_cast<std::size_t>(n_), -1);
    std::deque<int> queue{src};
    dist[static_cast<std::size_t>(src)] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int w : neighbors(u)) {
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

std::optional<Edge> Graph::separated_pair() const {
    const auto d = bfs(0);
    for (int v = 0; v < n_; ++v)
        if (d[static_cast<std::size_t>(v)] < 0) return Edge{0, v};
    return std::nullopt;
}

Graph path_graph(int n) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph(n, std::move(e), n > 2 ? 2 : 1);
}

Graph cycle_graph(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return Graph(n, std::move(e), 2);
}

Graph complete_graph(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph(n, std::move(e), n - 1);
}

Graph grid_graph(int rows, int cols) {
    std::vector<Edge> e;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) e.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) e.emplace_back(id(r, c), id(r + 1, c));
        }
    return Graph(rows * cols, std::move(e), 4);
}

Graph barbell_triangles() {
    return Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}, 3);
}

FiniteMetricSpace graph_metric(const Graph& g) {
    if (auto sep = g.separated_pair()) {
        throw Error(ErrorKind::InvalidInput, "graph is disconnected: no path between " +
                                                 std::to_string(sep->first) + " and " +
                                                 std::to_string(sep->second));
    }
    const auto n = static_cast<std::size_t>(g.size());
    std::vector<double> dist(n * n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto row = g.bfs(static_cast<int>(s));
        for (std::size_t t = 0; t < n; ++t) dist[s * n + t] = row[t];
    }
    return FiniteMetricSpace::from_matrix(std::move(dist));
}

LipschitzResult lipschitz_constant(const FiniteMetricSpace& domain,
                                   const std::function<double(std::size_t, std::size_t)>& image_dist) {
    if (domain.size() < 2) throw Error(ErrorKind::Config, "Lipschitz constant needs two points");
    LipschitzResult best;
    for (std::size_t x = 0; x < domain.size(); ++x)
        for (std::size_t y = x + 1; y < domain.size(); ++y) {
            const double ratio = image_dist(x, y) / domain(x, y);
            if (ratio > best.constant) best = {ratio, x, y};
        }
    return best;
}

LipschitzResult lipschitz_constant(const FiniteMetricSpace& domain, const FiniteMetricSpace& codomain,
                                   const std::vector<std::size_t>& images) {
    if (images.size() != domain.size())
        throw Error(ErrorKind::Config, "point map is not total on its domain");
    for (auto i : images)
        if (i >= codomain.size()) throw Error(ErrorKind::Config, "point map image out of range");
    return lipschitz_constant(domain, [&](std::size_t x, std::size_t y) {
        return codomain(images[x], images[y]);
    });
}

std::vector<std::size_t> ball(const FiniteMetricSpace& space, std::size_t center, double r) {
    if (center >= space.size()) throw Error(ErrorKind::Config, "unknown ball center");
    if (r < 0) throw Error(ErrorKind::Config, "negative ball radius");
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < space.size(); ++x)
        if (space(center, x) <= r) out.push_back(x);
    return out;
}

std::vector<std::size_t> ball(const FiniteMetricSpace& space, const std::string& center, double r) {
    return ball(space, space.index_of(center), r);
}

BallGrowthResult ball_growth_check(const Graph& g, int k) {
    BallGrowthResult res;
    const double d = g.degree_bound();
    res.bound = 2.0 * std::pow(d, k);
    for (int v = 0; v < g.size(); ++v) {
        const auto dist = g.bfs(v);
        const auto size = static_cast<std::size_t>(
            std::count_if(dist.begin(), dist.end(), [k](int x) { return x >= 0 && x <= k; }));
        res.largest_ball = std::max(res.largest_ball, size);
        if (static_cast<double>(size) > res.bound && !res.violating_vertex) {
            res.ok = false;
            res.violating_vertex = v;
        }
    }
    return res;
}

}  // namespace coarse
