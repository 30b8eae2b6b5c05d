#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "coarse/metric.hpp"
#include "coarse/rng.hpp"

namespace coarse {

// Simple connected d-regular graph from the pairing model. Stubs are matched
// one pair at a time, rejecting loops and repeated edges; a dead end or a
// disconnected result restarts, at most 10 n times.
Graph random_regular(int n, int d, std::uint64_t seed);

// Vertices outside A adjacent to A.
std::vector<int> vertex_boundary(const Graph& g, const std::vector<int>& A);

struct CheegerResult {
    bool exact = false;
    double lower = 0.0, upper = 0.0;  // equal when exact
    std::vector<int> witness;         // minimizing set (exact only)
    const char* method() const { return exact ? "exact" : "spectral"; }
    double value() const { return exact ? lower : 0.5 * (lower + upper); }
};

// Exact min |dA|/|A| over 0 < |A| <= n/2 for n <= max_exact_n (at most 30);
// otherwise the interval [lambda1 / (2d), sqrt(2 d lambda1)].
CheegerResult cheeger_constant(const Graph& g, int max_exact_n = 24);

struct Spectrum {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns, unit norm
    double lambda1() const { return values(1); }
};

// Eigen-decomposition of L = D - A. Requires a connected graph.
Spectrum laplacian_spectrum(const Graph& g);

double lambda1(const Graph& g);

// 2|E| / ((n - 1) lambda1), which is d n / ((n - 1) lambda1) for d-regular graphs.
double poincare_constant(const Graph& g, double lambda1);

// Map V -> R^k, one row per vertex.
using VectorMap = Eigen::MatrixXd;

// [ (1/|P|) sum_pairs |f x - f y|^p ] / [ (1/|E|) sum_edges |f x - f y|^p ].
double poincare_ratio(const Graph& g, const VectorMap& f, double p = 2.0);

// Coordinates i.i.d. uniform in [-1, 1].
VectorMap random_vector_map(int n, int dim, Rng& rng);

// max over edges of |f x - f y|; the Lipschitz constant for the graph metric.
LipschitzResult graph_map_lipschitz(const Graph& g, const VectorMap& f);

// Divides by the Lipschitz constant (no-op for constant maps).
VectorMap normalize_lipschitz(const Graph& g, VectorMap f);

struct PoincareReport {
    double lambda1 = 0.0;
    double c0 = 0.0;
    int trials = 0;
    double max_ratio = 0.0;       // over random maps
    double eigen_ratio = 0.0;     // the lambda1 eigenvector
    int violations = 0;           // random maps with ratio > c0 (1 + 1e-9)
    bool attained = false;        // |eigen_ratio - c0| <= 1e-9 c0
    bool ok() const { return violations == 0 && attained; }
};

// Random maps cycle through dimensions 1, 2 and 8.
PoincareReport poincare_bound_check(const Graph& g, int trials, std::uint64_t seed);

struct CorollaryResult {
    double value = 0.0;  // (1/|P|) sum_pairs |f x - f y|^2
    double c0 = 0.0;
    bool ok = false;     // value <= c0 (1 + 1e-9)
};

// Throws when f is not 1-Lipschitz (naming a witnessing edge).
CorollaryResult lipschitz_bound_corollary(const Graph& g, const VectorMap& f, double c0);

// Eigenvectors 1..k of the Laplacian as coordinates, rescaled to be 1-Lipschitz.
VectorMap spectral_embedding(const Graph& g, int k);

struct ExpanderFamily {
    int degree = 0;
    std::vector<Graph> graphs;
    std::vector<double> lambda1;
    std::vector<CheegerResult> cheeger;
    double conductance = 0.0;   // min over members (exact value or spectral lower bound)
    double c0 = 0.0;            // max over members
    bool drift = false;         // some lambda1 below 0.1
};

ExpanderFamily make_family(const std::vector<int>& sizes, int d, std::uint64_t seed, int max_exact_n = 24);

// Family statistics for given graphs (degree = largest degree bound).
ExpanderFamily family_from_graphs(std::vector<Graph> graphs, int max_exact_n = 24);

}  // namespace coarse
