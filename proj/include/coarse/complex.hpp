#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coarse/metric.hpp"
#include "coarse/rng.hpp"

namespace coarse {

// Sorted list of vertex ids.
using Simplex = std::vector<int>;

Simplex make_simplex(std::vector<int> vertices);
bool is_face_of(const Simplex& face, const Simplex& simplex);
Simplex simplex_union(const Simplex& a, const Simplex& b);

// A point of a simplicial complex in barycentric form. The canonical form
// keeps only strictly positive weights, so `vertices` is the minimal carrier.
struct ComplexPoint {
    std::vector<int> vertices;
    std::vector<double> weights;

    static ComplexPoint vertex(int v) { return {{v}, {1.0}}; }
    // Merges duplicate vertices, drops non-positive weights and normalizes.
    static ComplexPoint from_pairs(std::vector<std::pair<int, double>> pairs);
    static ComplexPoint barycenter(const Simplex& s);

    const Simplex& carrier() const { return vertices; }
    double weight(int v) const;
};

bool operator==(const ComplexPoint& a, const ComplexPoint& b);

// Affine combination sum_i c_i p_i (coefficients non-negative, summing to 1).
ComplexPoint affine_combination(const std::vector<std::pair<double, const ComplexPoint*>>& terms);

// Uniformly distributed point in the interior of a simplex.
ComplexPoint random_interior_point(const Simplex& s, Rng& rng);

enum class MetricKind { Uniform, Euclidean, C0 };

const char* metric_kind_name(MetricKind kind);

// Finite simplicial complex whose simplices are Euclidean simplices with the
// recorded edge lengths. Three metric structures are supported:
//   uniform   - every edge has the same length (the complex "of size" lambda)
//   c0        - vertex levels i, edge length 2^max(level); simplices are
//               either standard of size 2^i or mixed with edges 2^i, 2^(i+1)
//   euclidean - arbitrary realizable edge lengths (subdivisions)
class MetricComplex {
public:
    static MetricComplex uniform(int vertex_count, std::vector<Simplex> simplices, double size);
    static MetricComplex c0(int vertex_count, std::vector<Simplex> simplices, std::vector<int> levels);
    static MetricComplex euclidean(int vertex_count, std::vector<Simplex> simplices,
                                   const std::map<Edge, double>& edge_lengths);

    MetricKind kind() const { return kind_; }
    double uniform_size() const { return size_; }
    const std::vector<int>& levels() const { return levels_; }
    int level(int v) const { return levels_.at(static_cast<std::size_t>(v)); }

    int vertex_count() const { return vertex_count_; }
    int dimension() const { return dimension_; }
    // Every face, sorted by dimension then lexicographically.
    const std::vector<Simplex>& simplices() const { return simplices_; }
    const std::vector<Simplex>& maximal_simplices() const { return maximal_; }
    std::optional<std::size_t> simplex_id(const Simplex& s) const;
    bool contains(const Simplex& s) const { return index_.count(s) != 0; }
    // Indices into maximal_simplices() of the maximal simplices containing `face`.
    std::vector<std::size_t> maximal_containing(const Simplex& face) const;
    const std::vector<int>& neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
    bool connected() const;

    double edge_length(int u, int v) const;
    double mesh() const;
    // l(simplex): the shortest edge of a simplex of dimension >= 1.
    double min_edge_length(const Simplex& s) const;

    // Vertex coordinates of the isometric realization, one row per vertex.
    Eigen::MatrixXd realize(const Simplex& s) const;
    double inradius(const Simplex& s) const;
    // Minimum inradius over maximal simplices of dimension >= 1.
    double min_inradius() const;

    bool share_simplex(const ComplexPoint& p, const ComplexPoint& q) const;
    // Euclidean distance of two points lying in a common simplex.
    double distance_within(const ComplexPoint& p, const ComplexPoint& q) const;
    // Distance from p to the closed face (both in a common simplex).
    double distance_to_face(const ComplexPoint& p, const Simplex& face) const;

private:
    MetricComplex() = default;
    void build(int vertex_count, std::vector<Simplex> simplices);
    void check_realizable() const;
    static std::uint64_t key(int u, int v);

    MetricKind kind_ = MetricKind::Uniform;
    double size_ = 1.0;
    std::vector<int> levels_;
    int vertex_count_ = 0;
    int dimension_ = 0;
    std::vector<Simplex> simplices_;
    std::vector<Simplex> maximal_;
    std::map<Simplex, std::size_t> index_;
    std::vector<std::vector<std::size_t>> vertex_maximal_;
    std::vector<std::vector<int>> adjacency_;
    std::unordered_map<std::uint64_t, double> edge_lengths_;
};

// Inradius of the regular n-simplex with edge a: a / sqrt(2 n (n + 1)).
double inradius(int n, double edge);

// Shortest paths on the 1-skeleton of the 2^depth-fold edge subdivision, with
// chords joining every two nodes that lie in a common simplex. Extra points can
// be inserted as nodes. Distances are upper bounds on the length metric and
// are non-increasing in depth.
class ComplexGeodesics {
public:
    ComplexGeodesics(const MetricComplex& K, int depth, std::vector<ComplexPoint> extra = {});

    std::size_t node_count() const { return nodes_.size(); }
    const ComplexPoint& node(std::size_t i) const { return nodes_[i]; }
    std::size_t extra_node(std::size_t j) const { return first_extra_ + j; }
    // Nodes lying in the given maximal simplex.
    const std::vector<std::size_t>& nodes_in_maximal(std::size_t m) const { return groups_[m]; }

    std::vector<double> from(std::size_t source) const;
    // Dijkstra with per-node initial values: out(z) = min_y (initial(y) + d(y, z)).
    std::vector<double> relax(std::vector<double> initial) const;

private:
    std::vector<ComplexPoint> nodes_;
    std::size_t first_extra_ = 0;
    std::vector<std::vector<std::size_t>> groups_;
    std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
};

double complex_distance(const MetricComplex& K, const ComplexPoint& p, const ComplexPoint& q, int depth);

// Iterated barycentric subdivision. The subdivided complex carries the metric
// of the original realization; `carrier` places each new vertex in K.
struct Subdivision {
    MetricComplex complex;
    std::vector<ComplexPoint> carrier;
    int times = 0;
};

Subdivision barycentric_subdivide(const MetricComplex& K, int times);

// Same combinatorics with the unit uniform metric, plus the per-maximal-simplex
// size 2^(lowest level).
struct Uniformized {
    MetricComplex complex;
    std::vector<double> scale_factors;
};

Uniformized uniformize(const MetricComplex& K);

}  // namespace coarse
