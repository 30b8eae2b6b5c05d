#include "coarse/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "coarse/covers.hpp"
#include "coarse/error.hpp"
#include "coarse/rng.hpp"

namespace coarse {

namespace {

std::vector<double> relative_lengths(const MetricComplex& K) {
    std::vector<double> out;
    out.reserve(K.simplices().size());
    for (const auto& s : K.simplices()) {
        double l = std::numeric_limits<double>::infinity();
        for (std::size_t m : K.maximal_containing(s)) l = std::min(l, K.min_edge_length(K.maximal_simplices()[m]));
        if (!std::isfinite(l))
            throw Error(ErrorKind::InvalidInput, "edge scale undefined on an isolated vertex");
        out.push_back(l);
    }
    return out;
}

}  // namespace

EdgeScale::EdgeScale(const MetricComplex& K, int depth)
    : K_(K), lrel_(relative_lengths(K)), nodes_(K, depth) {
    for (const auto& m : K_.maximal_simplices()) {
        Cell cell;
        cell.coords = K_.realize(m);
        const std::uint32_t full = (1u << m.size()) - 1;
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            Face f;
            std::vector<Eigen::Index> rows;
            for (std::size_t i = 0; i < m.size(); ++i)
                if (mask & (1u << i)) {
                    f.vertices.push_back(m[i]);
                    rows.push_back(static_cast<Eigen::Index>(i));
                }
            f.l = lrel_[*K_.simplex_id(f.vertices)];
            f.origin = cell.coords.row(rows[0]).transpose();
            f.basis.resize(cell.coords.cols(), static_cast<Eigen::Index>(rows.size()) - 1);
            for (std::size_t j = 1; j < rows.size(); ++j)
                f.basis.col(static_cast<Eigen::Index>(j) - 1) = cell.coords.row(rows[j]).transpose() - f.origin;
            if (f.basis.cols() > 0)
                f.solve = (f.basis.transpose() * f.basis).inverse() * f.basis.transpose();
            cell.faces.push_back(std::move(f));
        }
        cells_.push_back(std::move(cell));
    }
    std::vector<double> init(nodes_.node_count());
    for (std::size_t z = 0; z < init.size(); ++z) init[z] = local(nodes_.node(z));
    node_rho_ = nodes_.relax(std::move(init));
}

Eigen::VectorXd EdgeScale::position(std::size_t m, const ComplexPoint& x) const {
    const auto& s = K_.maximal_simplices()[m];
    const auto& P = cells_[m].coords;
    Eigen::VectorXd pos = Eigen::VectorXd::Zero(P.cols());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double w = x.weight(s[i]);
        if (w != 0.0) pos += w * P.row(static_cast<Eigen::Index>(i)).transpose();
    }
    return pos;
}

double EdgeScale::local(const ComplexPoint& x) const {
    // A face whose affine projection falls outside it is dominated by one of its
    // own faces, which has a smaller l and is enumerated too.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m : K_.maximal_containing(x.carrier())) {
        const Eigen::VectorXd pos = position(m, x);
        for (const auto& f : cells_[m].faces) {
            if (f.l >= best) continue;
            const Eigen::VectorXd rel = pos - f.origin;
            double dist;
            if (f.basis.cols() == 0) {
                dist = rel.norm();
            } else {
                const Eigen::VectorXd c = f.solve * rel;
                if (c.minCoeff() < -1e-12 || c.sum() > 1.0 + 1e-12) continue;
                dist = (rel - f.basis * c).norm();
            }
            best = std::min(best, f.l + dist);
        }
    }
    return best;
}

double EdgeScale::l(const ComplexPoint& x) const {
    const auto id = K_.simplex_id(x.carrier());
    if (!id) throw Error(ErrorKind::InvalidInput, "point does not lie in the complex");
    return lrel_[*id];
}

double EdgeScale::rho(const ComplexPoint& x) const {
    double best = local(x);
    for (std::size_t m : K_.maximal_containing(x.carrier()))
        for (std::size_t z : nodes_.nodes_in_maximal(m))
            best = std::min(best, K_.distance_within(x, nodes_.node(z)) + node_rho_[z]);
    return best;
}

double sparse_distance(const SparseVector& a, const SparseVector& b) {
    double sq = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            sq += a[i].second * a[i].second;
            ++i;
        } else if (i == a.size() || b[j].first < a[i].first) {
            sq += b[j].second * b[j].second;
            ++j;
        } else {
            const double d = a[i].second - b[j].second;
            sq += d * d;
            ++i;
            ++j;
        }
    }
    return std::sqrt(sq);
}

SparseVector embed_point(const EdgeScale& scale, const ComplexPoint& x) {
    const double r = scale.rho(x);
    SparseVector q;
    for (std::size_t i = 0; i < x.vertices.size(); ++i) q.emplace_back(x.vertices[i], r * x.weights[i]);
    return q;
}

EmbeddingCertificate certify_embedding(const MetricComplex& K, std::size_t pairs, std::uint64_t seed) {
    if (K.kind() != MetricKind::C0) throw Error(ErrorKind::Config, "the embedding needs a class C0 complex");
    const EdgeScale scale(K);
    Rng rng = substream(seed, "embedding-pairs");
    const auto& tops = K.maximal_simplices();
    auto sample = [&](const Simplex& s) {
        if (rng.uniform() < 0.25) return ComplexPoint::vertex(s[rng.below(s.size())]);
        return random_interior_point(s, rng);
    };
    EmbeddingCertificate cert;
    while (cert.pairs < pairs) {
        const Simplex& s = tops[rng.below(tops.size())];
        const ComplexPoint x = sample(s), y = sample(s);
        const double d = K.distance_within(x, y);
        if (d <= 0.0) continue;
        ++cert.pairs;
        const double rx = scale.rho(x), ry = scale.rho(y);
        for (auto [r, l] : {std::pair{rx, scale.l(x)}, std::pair{ry, scale.l(y)}})
            if (r < 0.5 * l * (1.0 - 1e-12) || r > l * (1.0 + 1e-12)) ++cert.sandwich_violations;
        const double rr = std::abs(rx - ry) / d;
        cert.max_rho_ratio = std::max(cert.max_rho_ratio, rr);
        if (std::abs(rx - ry) > d + 1e-9) ++cert.rho_violations;
        SparseVector qx, qy;
        for (std::size_t i = 0; i < x.vertices.size(); ++i) qx.emplace_back(x.vertices[i], rx * x.weights[i]);
        for (std::size_t i = 0; i < y.vertices.size(); ++i) qy.emplace_back(y.vertices[i], ry * y.weights[i]);
        const double e = sparse_distance(qx, qy);
        cert.max_ratio = std::max(cert.max_ratio, e / d);
        if (e > 3.0 * d + 1e-9) ++cert.lipschitz_violations;
    }
    return cert;
}

EmbeddedCloud hilbert_embed(const MetricComplex& K, const std::vector<ComplexPoint>& points,
                            std::size_t check_pairs, std::uint64_t seed) {
    const auto cert = certify_embedding(K, check_pairs, seed);
    if (!cert.ok()) {
        std::ostringstream os;
        os << "embedding certificate failed: " << cert.lipschitz_violations << " Lipschitz, "
           << cert.sandwich_violations << " sandwich and " << cert.rho_violations << " rho violations";
        throw Error(ErrorKind::Assertion, os.str());
    }
    const EdgeScale scale(K);
    EmbeddedCloud cloud;
    cloud.provenance = "lemma63";
    cloud.coords = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points.size()), K.vertex_count());
    for (std::size_t i = 0; i < points.size(); ++i) {
        cloud.ids.push_back(std::to_string(i));
        const double l = scale.l(points[i]);
        const double r = scale.rho(points[i]);
        if (r < 0.5 * l * (1.0 - 1e-12) || r > l * (1.0 + 1e-12))
            throw Error(ErrorKind::Assertion, "rho leaves [l/2, l] at point " + std::to_string(i));
        for (std::size_t j = 0; j < points[i].vertices.size(); ++j)
            cloud.coords(static_cast<Eigen::Index>(i), points[i].vertices[j]) = r * points[i].weights[j];
    }
    return cloud;
}

MetricComplex random_c0_complex(std::uint64_t seed, int max_vertices) {
    Rng rng = substream(seed, "c0-complex");
    const int section = static_cast<int>(rng.below(3)) + 1;  // vertices per column
    const int first = static_cast<int>(rng.below(3));
    const int blocks = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(7 - first)));
    std::vector<int> column_level;
    for (int b = 0; b < blocks; ++b) {
        const int width = 2 + static_cast<int>(rng.below(3));
        for (int w = 0; w < width; ++w) column_level.push_back(first + b);
    }
    while (static_cast<int>(column_level.size()) * section > max_vertices) column_level.pop_back();
    const int columns = static_cast<int>(column_level.size());
    if (columns < 2) throw Error(ErrorKind::Config, "vertex budget too small for a telescope");
    std::vector<int> levels;
    for (int c = 0; c < columns; ++c)
        for (int i = 0; i < section; ++i) levels.push_back(column_level[static_cast<std::size_t>(c)]);
    std::vector<Simplex> cells;
    for (int c = 0; c + 1 < columns; ++c)
        for (int r = 0; r < section; ++r) {
            Simplex s;
            for (int i = 0; i <= r; ++i) s.push_back(c * section + i);
            for (int i = r; i < section; ++i) s.push_back((c + 1) * section + i);
            cells.push_back(s);
        }
    return MetricComplex::c0(columns * section, std::move(cells), std::move(levels));
}

double CompressionProfile::rho1(double t) const {
    const int b = static_cast<int>(std::floor(t));
    for (const auto& bucket : buckets)
        if (bucket.bucket >= b) return bucket.rho1;
    return std::numeric_limits<double>::infinity();
}

double CompressionProfile::rho2(double t) const {
    const int b = static_cast<int>(std::floor(t));
    double out = 0.0;
    for (const auto& bucket : buckets)
        if (bucket.bucket <= b) out = bucket.rho2;
    return out;
}

CompressionProfile compression_profile(const FiniteMetricSpace& source, const Eigen::MatrixXd& coords) {
    if (source.size() < 2) throw Error(ErrorKind::Config, "compression profile needs two points");
    if (static_cast<std::size_t>(coords.rows()) != source.size())
        throw Error(ErrorKind::Config, "cloud needs one vector per point");
    std::map<int, ProfileBucket> acc;
    for (std::size_t x = 0; x < source.size(); ++x)
        for (std::size_t y = x + 1; y < source.size(); ++y) {
            const int b = static_cast<int>(std::floor(source(x, y)));
            const double e = (coords.row(static_cast<Eigen::Index>(x)) - coords.row(static_cast<Eigen::Index>(y))).norm();
            auto [it, fresh] = acc.try_emplace(b);
            auto& bucket = it->second;
            if (fresh) {
                bucket.bucket = b;
                bucket.min = bucket.max = e;
            }
            ++bucket.count;
            bucket.min = std::min(bucket.min, e);
            bucket.max = std::max(bucket.max, e);
            bucket.mean += e;
        }
    CompressionProfile prof;
    for (auto& [b, bucket] : acc) {
        bucket.mean /= static_cast<double>(bucket.count);
        prof.buckets.push_back(bucket);
    }
    double run = 0.0;
    for (auto& bucket : prof.buckets) bucket.rho2 = run = std::max(run, bucket.max);
    run = std::numeric_limits<double>::infinity();
    for (auto it = prof.buckets.rbegin(); it != prof.buckets.rend(); ++it) it->rho1 = run = std::min(run, it->min);
    return prof;
}

int ScaleSchedule::n_at(double t) const {
    int best = 0;
    for (std::size_t j = 0; j < members.size(); ++j) {
        const double top = *std::max_element(norms[j].begin(), norms[j].end());
        if (top >= t && (best == 0 || members[j].n < best)) best = members[j].n;
    }
    return best;
}

ScaleSchedule scale_schedule(const ExpanderFamily& family) {
    ScaleSchedule sched;
    sched.degree = family.degree;
    const double logd = std::log(static_cast<double>(family.degree));
    std::vector<std::vector<int>> from_root;
    for (const auto& g : family.graphs) {
        ScheduleMember m;
        m.n = g.size();
        const auto X = graph_metric(g);
        m.diameter = X.diameter();
        m.far_threshold = std::log(m.n / 4.0) / logd;
        sched.members.push_back(m);
        from_root.push_back(g.bfs(0));
    }
    for (std::size_t j = 0; j < sched.members.size(); ++j) {
        if (j > 0) {
            const auto& prev = sched.members[j - 1];
            sched.members[j].offset =
                prev.offset + prev.diameter + sched.members[j].diameter + std::ldexp(1.0, static_cast<int>(j));
        }
        std::vector<double> norms;
        for (int dist : from_root[j]) norms.push_back(sched.members[j].offset + dist);
        sched.norms.push_back(std::move(norms));
    }
    for (std::size_t j = 0; j < sched.members.size(); ++j) {
        std::vector<double> budget;
        for (double r : sched.norms[j]) budget.push_back(0.999 * std::log(static_cast<double>(sched.n_at(r))) / logd / 4.0);
        sched.members[j].min_budget = *std::min_element(budget.begin(), budget.end());
        sched.members[j].max_budget = *std::max_element(budget.begin(), budget.end());
        sched.budgets.push_back(std::move(budget));
    }
    std::vector<double> all;
    for (const auto& norms : sched.norms) all.insert(all.end(), norms.begin(), norms.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i)
        if (sched.n_at(all[i]) < sched.n_at(all[i - 1])) sched.n_monotone = false;
    for (std::size_t j = 1; j < sched.members.size(); ++j)
        if (sched.members[j].min_budget < sched.members[j - 1].min_budget) sched.proper = false;
    if (sched.members.size() > 1 && !(sched.members.back().min_budget > sched.members.front().min_budget))
        sched.proper = false;
    return sched;
}

FarPairCensus far_pair_census(const Graph& g) {
    FarPairCensus c;
    c.n = g.size();
    c.d = g.degree_bound();
    if (c.d < 2) throw Error(ErrorKind::Config, "census needs degree at least 2");
    c.threshold = std::log(c.n / 4.0) / std::log(static_cast<double>(c.d));
    const double cut = c.threshold - 1e-9;
    c.k = static_cast<int>(std::ceil(cut)) - 1;
    c.ball_bound = 2.0 * std::pow(static_cast<double>(c.d), std::max(c.k, 0));
    for (int x = 0; x < c.n; ++x) {
        const auto dist = g.bfs(x);
        if (std::find(dist.begin(), dist.end(), -1) != dist.end())
            throw Error(ErrorKind::InvalidInput, "census needs a connected graph");
        std::size_t ball = 0;
        for (int y = 0; y < c.n; ++y) {
            const int dy = dist[static_cast<std::size_t>(y)];
            if (dy < cut) {
                ++ball;
                if (y > x) ++c.near_pairs;
            } else if (y > x) {
                ++c.far_pairs;
            }
        }
        c.max_near_ball = std::max(c.max_near_ball, ball);
        if (c.k >= 0 && static_cast<double>(ball) > c.ball_bound) c.ball_ok = false;
    }
    c.fraction = static_cast<double>(c.far_pairs) / (static_cast<double>(c.n) * c.n);
    return c;
}

const char* audit_source_name(AuditSource s) {
    switch (s) {
        case AuditSource::Spectral: return "spectral";
        case AuditSource::Lemma63: return "lemma63";
        case AuditSource::User: return "user";
        case AuditSource::Constant: return "constant";
    }
    return "unknown";
}

Eigen::MatrixXd audit_map(const ExpanderFamily& family, std::size_t member, const ScaleSchedule& schedule,
                          const AuditOptions& options) {
    const Graph& g = family.graphs.at(member);
    switch (options.source) {
        case AuditSource::Spectral:
            return spectral_embedding(g, options.spectral_dim);
        case AuditSource::Constant:
            return Eigen::MatrixXd::Zero(g.size(), 1);
        case AuditSource::User: {
            const auto& f = options.user_maps.at(member);
            if (f.rows() != g.size()) throw Error(ErrorKind::InvalidInput, "user map has the wrong number of rows");
            return f;
        }
        case AuditSource::Lemma63: {
            const auto X = graph_metric(g);
            const double lambda = std::max(1.0, schedule.members.at(member).min_budget);
            const Cover cover = greedy_cover(X, lambda, 1);
            const CoverStats st = cover_stats(X, cover);
            const NerveProjection p = nerve_projection(X, cover, st.lebesgue / 2.0);
            const auto nerve = MetricComplex::c0(p.nerve.vertex_count, p.nerve.generators,
                                                 std::vector<int>(static_cast<std::size_t>(p.nerve.vertex_count),
                                                                  static_cast<int>(member)));
            return hilbert_embed(nerve, p.image, 200, substream_seed(options.seed, "audit-embed", member)).coords;
        }
    }
    throw Error(ErrorKind::Config, "unknown audit source");
}

std::vector<AuditRow> obstruction_audit(const ExpanderFamily& family, const AuditOptions& options) {
    if (options.source == AuditSource::User && options.user_maps.size() != family.graphs.size())
        throw Error(ErrorKind::InvalidInput, "need one user map per family member");
    const ScaleSchedule schedule = scale_schedule(family);
    std::vector<AuditRow> rows;
    for (std::size_t m = 0; m < family.graphs.size(); ++m) {
        const Graph& g = family.graphs[m];
        AuditRow row;
        row.n = g.size();
        row.lambda1 = family.lambda1[m];
        row.c0 = poincare_constant(g, row.lambda1);
        row.threshold = schedule.members[m].far_threshold;
        row.bound_4c0 = 4.0 * row.c0 * (1.0 + 1e-6);
        row.rho1_bound = 2.0 * std::sqrt(row.c0) * (1.0 + 1e-6);
        row.far_fraction_ok = far_pair_census(g).meets_eighth();

        Eigen::MatrixXd f = audit_map(family, m, schedule, options);
        row.lipschitz = graph_map_lipschitz(g, f).constant;
        if (row.lipschitz > 1.0) f /= row.lipschitz;

        const auto X = graph_metric(g);
        row.min_far_sq = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < X.size(); ++x)
            for (std::size_t y = x + 1; y < X.size(); ++y) {
                if (X(x, y) < row.threshold - 1e-9) continue;
                const double sq = (f.row(static_cast<Eigen::Index>(x)) - f.row(static_cast<Eigen::Index>(y))).squaredNorm();
                if (sq < row.min_far_sq) {
                    row.min_far_sq = sq;
                    row.witness_x = static_cast<int>(x);
                    row.witness_y = static_cast<int>(y);
                }
            }
        row.pass_bound = row.min_far_sq <= row.bound_4c0;
        row.profile = compression_profile(X, f);
        row.rho1_at_threshold = row.profile.rho1(row.threshold);
        row.pass_rho1 = row.rho1_at_threshold <= row.rho1_bound;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace coarse
