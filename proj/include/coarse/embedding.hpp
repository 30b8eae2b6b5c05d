#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarse/complex.hpp"
#include "coarse/metric.hpp"
#include "coarse/spectral.hpp"

namespace coarse {

// l(x) = shortest edge over simplices containing x, and the 1-Lipschitz
// minorant rho(x) = inf_y (l(y) + d(x, y)). Near x the infimum is evaluated
// exactly over the faces of the simplices containing x; farther away it goes
// through shortest paths between the nodes of a depth-1 edge subdivision.
class EdgeScale {
public:
    explicit EdgeScale(const MetricComplex& K, int depth = 1);

    double l(const ComplexPoint& x) const;
    double rho(const ComplexPoint& x) const;

private:
    struct Face {
        Simplex vertices;                // global ids
        double l = 0.0;                  // l on the relative interior
        Eigen::VectorXd origin;
        Eigen::MatrixXd basis;           // columns: vertex - origin
        Eigen::MatrixXd solve;           // (B^T B)^-1 B^T
    };
    struct Cell {
        Eigen::MatrixXd coords;          // realization, one row per vertex
        std::vector<Face> faces;
    };
    double local(const ComplexPoint& x) const;
    Eigen::VectorXd position(std::size_t m, const ComplexPoint& x) const;

    MetricComplex K_;
    std::vector<double> lrel_;           // per simplex id
    std::vector<Cell> cells_;            // per maximal simplex
    ComplexGeodesics nodes_;
    std::vector<double> node_rho_;
};

// Sparse vector over the global vertex set.
using SparseVector = std::vector<std::pair<int, double>>;

double sparse_distance(const SparseVector& a, const SparseVector& b);

// q(x) = rho(x) * (barycentric coordinates of x).
SparseVector embed_point(const EdgeScale& scale, const ComplexPoint& x);

struct EmbeddingCertificate {
    std::size_t pairs = 0;
    std::size_t lipschitz_violations = 0;   // |q x - q y| > 3 d + 1e-9
    std::size_t sandwich_violations = 0;    // rho outside [l/2, l]
    std::size_t rho_violations = 0;         // |rho x - rho y| > d + 1e-9
    double max_ratio = 0.0;                 // max |q x - q y| / d
    double max_rho_ratio = 0.0;
    bool ok() const { return lipschitz_violations == 0 && sandwich_violations == 0 && rho_violations == 0; }
};

// Random pairs inside random maximal simplices (vertices or interior points).
EmbeddingCertificate certify_embedding(const MetricComplex& K, std::size_t pairs, std::uint64_t seed);

struct EmbeddedCloud {
    std::vector<std::string> ids;
    Eigen::MatrixXd coords;  // one row per point
    std::string provenance;
};

// Embeds the given points of a class C0 complex and certifies the 3-Lipschitz
// bound on `check_pairs` sampled pairs first (throws an assertion error).
EmbeddedCloud hilbert_embed(const MetricComplex& K, const std::vector<ComplexPoint>& points,
                            std::size_t check_pairs = 1000, std::uint64_t seed = 1);

// Class C0 "telescope": a strip of prisms over a simplex of dimension 0..2,
// column levels non-decreasing in blocks of 2 to 4 columns, levels within 0..8.
MetricComplex random_c0_complex(std::uint64_t seed, int max_vertices = 200);

struct ProfileBucket {
    int bucket = 0;  // source distances in [bucket, bucket + 1)
    std::size_t count = 0;
    double min = 0.0, mean = 0.0, max = 0.0;
    double rho1 = 0.0, rho2 = 0.0;
};

struct CompressionProfile {
    std::vector<ProfileBucket> buckets;  // non-empty buckets, ascending
    // Step functions; rho1 is the running minimum from the right, rho2 the running maximum from the left.
    double rho1(double t) const;
    double rho2(double t) const;
};

// Pairwise source distances from the metric, embedded distances from the rows.
CompressionProfile compression_profile(const FiniteMetricSpace& source, const Eigen::MatrixXd& coords);

// Coarse disjoint union of a family: member j's vertex 0 joined to member
// (j+1)'s vertex 0 by a path of length diam_j + diam_(j+1) + 2^(j+1).
struct ScheduleMember {
    int n = 0;
    double diameter = 0.0;
    double offset = 0.0;          // |vertex 0| in the union
    double far_threshold = 0.0;   // log_d(n / 4)
    double min_budget = 0.0, max_budget = 0.0;
};

struct ScaleSchedule {
    int degree = 0;
    std::vector<ScheduleMember> members;
    std::vector<std::vector<double>> norms;    // |x| per member vertex
    std::vector<std::vector<double>> budgets;  // 0.999 * log_d(n(|x|)) / 4
    bool n_monotone = true;                    // n(t) non-decreasing
    bool proper = true;                        // member budgets non-decreasing and growing
    // n(t) = smallest member size among members with a point of norm >= t.
    int n_at(double t) const;
};

ScaleSchedule scale_schedule(const ExpanderFamily& family);

struct FarPairCensus {
    int n = 0, d = 0;
    double threshold = 0.0;        // log_d(n / 4)
    long long far_pairs = 0;       // d(x, y) >= threshold
    long long near_pairs = 0;      // 0 < d(x, y) < threshold
    int k = 0;                     // largest integer radius below the threshold
    double ball_bound = 0.0;       // 2 d^k
    std::size_t max_near_ball = 0; // max |{y : d(x, y) < threshold}|, center included
    bool ball_ok = true;           // every near ball <= 2 d^k
    double fraction = 0.0;         // far_pairs / n^2
    bool meets_eighth() const { return 8 * far_pairs >= static_cast<long long>(n) * n; }
};

FarPairCensus far_pair_census(const Graph& g);

enum class AuditSource { Spectral, Lemma63, User, Constant };

const char* audit_source_name(AuditSource s);

struct AuditRow {
    int n = 0;
    double lambda1 = 0.0, c0 = 0.0, threshold = 0.0;
    double lipschitz = 0.0;         // L(f) before normalization
    double min_far_sq = 0.0;
    double bound_4c0 = 0.0;         // 4 c0 (1 + 1e-6)
    int witness_x = -1, witness_y = -1;
    double rho1_at_threshold = 0.0;
    double rho1_bound = 0.0;        // 2 sqrt(c0) (1 + 1e-6)
    bool far_fraction_ok = false;   // at least n^2/8 far pairs
    bool pass_bound = false, pass_rho1 = false;
    bool pass() const { return pass_bound && pass_rho1; }
    CompressionProfile profile;
};

struct AuditOptions {
    AuditSource source = AuditSource::Spectral;
    int spectral_dim = 3;
    std::vector<Eigen::MatrixXd> user_maps;  // one per member for AuditSource::User
    std::uint64_t seed = 1;
};

// Map used for one member (before Lipschitz normalization).
Eigen::MatrixXd audit_map(const ExpanderFamily& family, std::size_t member, const ScaleSchedule& schedule,
                          const AuditOptions& options);

std::vector<AuditRow> obstruction_audit(const ExpanderFamily& family, const AuditOptions& options);

}  // namespace coarse
