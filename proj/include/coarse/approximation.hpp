#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarse/complex.hpp"

namespace coarse {

// Piecewise-linear map given by vertex images, extended affinely. The images of
// the vertices of every domain simplex must lie in one codomain simplex.
struct PLMap {
    MetricComplex domain;
    MetricComplex codomain;
    std::vector<ComplexPoint> images;
};

PLMap make_pl_map(MetricComplex domain, MetricComplex codomain, std::vector<ComplexPoint> images);

ComplexPoint pl_evaluate(const PLMap& f, const ComplexPoint& x);

// Every vertex goes to a vertex.
bool is_simplicial(const PLMap& f);

// Largest operator norm of the affine pieces, i.e. the Lipschitz constant with
// respect to the simplexwise Euclidean metrics.
double pl_lipschitz(const PLMap& f);

struct ApproximationOptions {
    std::optional<int> depth;        // force this many subdivisions
    int max_depth = 8;
    std::size_t max_simplices = 250000;
    int samples_per_simplex = 3;
    std::uint64_t seed = 1;
};

struct ApproximationResult {
    Subdivision subdivision;                 // the domain triangulation T
    std::vector<ComplexPoint> f_values;      // f at the vertices of T
    std::vector<int> g;                      // simplicial approximation on vertices of T
    double lambda = 0.0;
    double target_mesh = 0.0;                // r_n / (4 lambda)
    double mesh = 0.0;
    double r_T = 0.0;                        // smallest inradius of T
    double mu = 0.0;                         // 1 / r_T
    std::size_t star_ok = 0, star_total = 0;          // closed-star condition per vertex of T
    std::size_t open_star_ok = 0, open_star_total = 0;  // sampled open-star points
    std::size_t carrier_ok = 0, samples = 0;          // g(x) inside the carrier of f(x)
    bool g_simplicial = false;
    bool homotopy_defined = false;
    double homotopy_lipschitz = 0.0;          // sampled, on T x [0, 1]
};

// Subdivides the domain until mesh < r_n / (4 lambda) (n = codomain dimension,
// r_n the inradius of its simplices) and picks, for each vertex a, the vertex v
// with largest f_v(a) among those with f_v > 0 on the whole closed star of a
// (lowest id on ties). Simplicial inputs are returned unchanged. Throws an
// approximation error naming the vertex when no such v exists.
ApproximationResult simplicial_approximation(const PLMap& f, const ApproximationOptions& options = {});

// Random PL maps used by tests and the CLI: dimension 1 maps are random walks,
// dimension 2 and 3 maps are small perturbations inside one codomain simplex.
PLMap random_pl_map(int domain_dimension, std::uint64_t seed);

}  // namespace coarse
