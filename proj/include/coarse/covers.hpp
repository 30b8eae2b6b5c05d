#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "coarse/complex.hpp"
#include "coarse/metric.hpp"

namespace coarse {

// Indexed family of point subsets (indices into a FiniteMetricSpace).
struct Cover {
    double lambda = 1.0;
    std::vector<std::vector<std::size_t>> sets;  // each sorted, non-empty
};

// Sorts sets and checks that they are non-empty, in range and cover every point.
Cover make_cover(const FiniteMetricSpace& space, std::vector<std::vector<std::size_t>> sets, double lambda);

struct CoverStats {
    double mesh = 0.0;
    int multiplicity = 0;
    double lebesgue = 0.0;
};

CoverStats cover_stats(const FiniteMetricSpace& space, const Cover& cover);

// Greedy lambda-net (lowest index first) with closed lambda-balls, followed by
// `passes` rounds that add an open (lambda/2)-ball around every point whose
// best complement distance is below lambda/2 to the set of its nearest center.
Cover greedy_cover(const FiniteMetricSpace& space, double lambda, int passes = 1);

// t[x][U] = d(x, X \ U); 0 for x outside U and the mesh for U = X.
std::vector<std::vector<double>> complement_distances(const FiniteMetricSpace& space, const Cover& cover);

// Same table, but throws when some point has no positive entry.
std::vector<std::vector<double>> distance_coordinates(const FiniteMetricSpace& space, const Cover& cover);

struct Nerve {
    int vertex_count = 0;
    int dimension = 0;
    // Distinct sets S(x) = {U : x in U}; together with their faces they form the nerve.
    std::vector<Simplex> generators;
    // Every nerve simplex with the points lying in all of its sets.
    std::map<Simplex, std::vector<std::size_t>> carrier;
};

Nerve build_nerve(const FiniteMetricSpace& space, const Cover& cover);

// Largest c for which the l-infinity spherical n-simplex of radius 1, read in
// barycentric coordinates, maps 1-Lipschitz onto the Euclidean simplex of edge
// c. Sampled estimate times 0.99; cached per n. c_0 = 1.
double nerve_constant(int n);

struct NerveProjection {
    double scale = 0.0;         // radius of the l-infinity sphere
    double constant = 1.0;      // c_n for n = nerve dimension
    Nerve nerve;
    MetricComplex complex;      // uniform, edge constant * scale
    std::vector<std::vector<double>> sphere;  // projected coordinates, sup norm = scale
    std::vector<ComplexPoint> image;          // barycentric image per point
};

// Requires lebesgue(cover) >= 2 * scale.
NerveProjection nerve_projection(const FiniteMetricSpace& space, const Cover& cover, double scale);

struct ProjectionLipschitz {
    LipschitzResult nerve;   // against the nerve metric
    LipschitzResult sphere;  // against the sup norm of the sphere coordinates
};

// Pairwise ratios. Nerve distances are exact inside a common simplex and
// otherwise shortest paths over the depth-`depth` edge subdivision with chords.
ProjectionLipschitz projection_lipschitz(const FiniteMetricSpace& space, const NerveProjection& p,
                                         int depth = 1);

struct CoboundedResult {
    bool ok = true;
    double worst_diameter = 0.0;
    Simplex worst_simplex;
    std::size_t checked = 0;  // simplices with non-empty preimage
};

// Preimage of each open simplex (points whose image has exactly that support).
CoboundedResult cobounded_check(const FiniteMetricSpace& space, const NerveProjection& p, double bound);

}  // namespace coarse
