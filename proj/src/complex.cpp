#include "coarse/complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "coarse/error.hpp"

namespace coarse {

namespace {

std::string to_string(const Simplex& s) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << ']';
    return os.str();
}

bool simplex_order(const Simplex& a, const Simplex& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

Simplex make_simplex(std::vector<int> vertices) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return vertices;
}

bool is_face_of(const Simplex& face, const Simplex& simplex) {
    return std::includes(simplex.begin(), simplex.end(), face.begin(), face.end());
}

Simplex simplex_union(const Simplex& a, const Simplex& b) {
    Simplex out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

ComplexPoint ComplexPoint::from_pairs(std::vector<std::pair<int, double>> pairs) {
    std::sort(pairs.begin(), pairs.end());
    ComplexPoint p;
    double total = 0.0;
    for (std::size_t i = 0; i < pairs.size();) {
        const int v = pairs[i].first;
        double w = 0.0;
        for (; i < pairs.size() && pairs[i].first == v; ++i) w += pairs[i].second;
        if (w > 0.0) {
            p.vertices.push_back(v);
            p.weights.push_back(w);
            total += w;
        }
    }
    if (p.vertices.empty() || !(total > 0.0))
        throw Error(ErrorKind::InvalidInput, "complex point has no positive weight");
    for (double& w : p.weights) w /= total;
    return p;
}

ComplexPoint ComplexPoint::barycenter(const Simplex& s) {
    return {s, std::vector<double>(s.size(), 1.0 / static_cast<double>(s.size()))};
}

double ComplexPoint::weight(int v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || *it != v) return 0.0;
    return weights[static_cast<std::size_t>(it - vertices.begin())];
}

bool operator==(const ComplexPoint& a, const ComplexPoint& b) {
    return a.vertices == b.vertices && a.weights == b.weights;
}

ComplexPoint affine_combination(const std::vector<std::pair<double, const ComplexPoint*>>& terms) {
    std::vector<std::pair<int, double>> pairs;
    for (const auto& [c, p] : terms)
        for (std::size_t i = 0; i < p->vertices.size(); ++i)
            pairs.emplace_back(p->vertices[i], c * p->weights[i]);
    return ComplexPoint::from_pairs(std::move(pairs));
}

ComplexPoint random_interior_point(const Simplex& s, Rng& rng) {
    std::vector<std::pair<int, double>> pairs;
    for (int v : s) pairs.emplace_back(v, rng.exponential());
    return ComplexPoint::from_pairs(std::move(pairs));
}

const char* metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Uniform: return "uniform";
        case MetricKind::Euclidean: return "euclidean";
        case MetricKind::C0: return "c0";
    }
    return "unknown";
}

std::uint64_t MetricComplex::key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

void MetricComplex::build(int vertex_count, std::vector<Simplex> input) {
    if (vertex_count <= 0) throw Error(ErrorKind::InvalidInput, "complex has no vertices");
    vertex_count_ = vertex_count;
    std::set<Simplex> faces;
    for (int v = 0; v < vertex_count; ++v) faces.insert(Simplex{v});
    for (auto& raw : input) {
        const Simplex s = make_simplex(raw);
        if (s.empty()) throw Error(ErrorKind::InvalidInput, "empty simplex");
        if (s.front() < 0 || s.back() >= vertex_count)
            throw Error(ErrorKind::InvalidInput, "simplex " + to_string(s) + " uses unknown vertex");
        if (s.size() > 24) throw Error(ErrorKind::InvalidInput, "simplex dimension too large");
        if (faces.count(s)) continue;
        const std::uint32_t full = (1u << s.size()) - 1;
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            Simplex f;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (mask & (1u << i)) f.push_back(s[i]);
            faces.insert(std::move(f));
        }
    }
    simplices_.assign(faces.begin(), faces.end());
    std::sort(simplices_.begin(), simplices_.end(), simplex_order);
    for (std::size_t i = 0; i < simplices_.size(); ++i) index_.emplace(simplices_[i], i);

    std::vector<char> has_coface(simplices_.size(), 0);
    dimension_ = 0;
    for (const auto& s : simplices_) {
        dimension_ = std::max(dimension_, static_cast<int>(s.size()) - 1);
        if (s.size() < 2) continue;
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            Simplex f = s;
            f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
            has_coface[index_.at(f)] = 1;
        }
    }
    vertex_maximal_.assign(static_cast<std::size_t>(vertex_count), {});
    adjacency_.assign(static_cast<std::size_t>(vertex_count), {});
    for (std::size_t i = 0; i < simplices_.size(); ++i) {
        const auto& s = simplices_[i];
        if (s.size() == 2) {
            adjacency_[static_cast<std::size_t>(s[0])].push_back(s[1]);
            adjacency_[static_cast<std::size_t>(s[1])].push_back(s[0]);
        }
        if (has_coface[i]) continue;
        for (int v : s) vertex_maximal_[static_cast<std::size_t>(v)].push_back(maximal_.size());
        maximal_.push_back(s);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

MetricComplex MetricComplex::uniform(int vertex_count, std::vector<Simplex> simplices, double size) {
    if (!(size > 0.0)) throw Error(ErrorKind::InvalidInput, "uniform size must be positive");
    MetricComplex K;
    K.kind_ = MetricKind::Uniform;
    K.size_ = size;
    K.build(vertex_count, std::move(simplices));
    for (const auto& s : K.simplices_)
        if (s.size() == 2) K.edge_lengths_[key(s[0], s[1])] = size;
    return K;
}

MetricComplex MetricComplex::c0(int vertex_count, std::vector<Simplex> simplices, std::vector<int> levels) {
    if (static_cast<int>(levels.size()) != vertex_count)
        throw Error(ErrorKind::InvalidInput, "c0 complex needs one level per vertex");
    MetricComplex K;
    K.kind_ = MetricKind::C0;
    K.levels_ = std::move(levels);
    K.build(vertex_count, std::move(simplices));
    for (const auto& s : K.simplices_)
        if (s.size() == 2)
            K.edge_lengths_[key(s[0], s[1])] = std::ldexp(1.0, std::max(K.level(s[0]), K.level(s[1])));

    // Simplex types: (lowest level, mixed). Mixed simplices span two adjacent levels.
    auto type_of = [&K](const Simplex& s) {
        int lo = K.level(s.front()), hi = lo;
        for (int v : s) {
            lo = std::min(lo, K.level(v));
            hi = std::max(hi, K.level(v));
        }
        if (hi - lo > 1)
            throw Error(ErrorKind::InvalidInput,
                        "simplex " + to_string(s) + " spans levels " + std::to_string(lo) + ".." +
                            std::to_string(hi));
        return std::pair<int, bool>{lo, hi != lo};
    };
    std::vector<std::pair<int, bool>> types;
    for (const auto& s : K.maximal_) types.push_back(type_of(s));
    auto compatible = [](std::pair<int, bool> a, std::pair<int, bool> b) {
        if (a == b) return true;
        if (a.second) std::swap(a, b);  // a standard, b mixed
        if (a.second || !b.second) return false;
        return b.first == a.first || b.first == a.first - 1;
    };
    for (int v = 0; v < vertex_count; ++v) {
        const auto& incident = K.vertex_maximal_[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < incident.size(); ++i)
            for (std::size_t j = i + 1; j < incident.size(); ++j)
                if (!compatible(types[incident[i]], types[incident[j]]))
                    throw Error(ErrorKind::InvalidInput,
                                "c0 adjacency violated by " + to_string(K.maximal_[incident[i]]) +
                                    " and " + to_string(K.maximal_[incident[j]]));
    }
    K.check_realizable();
    return K;
}

MetricComplex MetricComplex::euclidean(int vertex_count, std::vector<Simplex> simplices,
                                       const std::map<Edge, double>& edge_lengths) {
    MetricComplex K;
    K.kind_ = MetricKind::Euclidean;
    K.build(vertex_count, std::move(simplices));
    for (const auto& s : K.simplices_) {
        if (s.size() != 2) continue;
        auto it = edge_lengths.find({s[0], s[1]});
        if (it == edge_lengths.end() || !(it->second > 0.0))
            throw Error(ErrorKind::InvalidInput, "missing or non-positive length for edge " + to_string(s));
        K.edge_lengths_[key(s[0], s[1])] = it->second;
    }
    K.check_realizable();
    return K;
}

std::optional<std::size_t> MetricComplex::simplex_id(const Simplex& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> MetricComplex::maximal_containing(const Simplex& face) const {
    std::vector<std::size_t> out;
    if (face.empty()) return out;
    for (std::size_t m : vertex_maximal_.at(static_cast<std::size_t>(face.front())))
        if (is_face_of(face, maximal_[m])) out.push_back(m);
    return out;
}

bool MetricComplex::connected() const {
    std::vector<char> seen(static_cast<std::size_t>(vertex_count_), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int w : neighbors(u))
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == vertex_count_;
}

double MetricComplex::edge_length(int u, int v) const {
    auto it = edge_lengths_.find(key(u, v));
    if (it == edge_lengths_.end())
        throw Error(ErrorKind::InvalidInput,
                    "no edge between " + std::to_string(u) + " and " + std::to_string(v));
    return it->second;
}

double MetricComplex::mesh() const {
    double m = 0.0;
    for (const auto& [k, len] : edge_lengths_) m = std::max(m, len);
    return m;
}

double MetricComplex::min_edge_length(const Simplex& s) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) m = std::min(m, edge_length(s[i], s[j]));
    return m;
}

Eigen::MatrixXd MetricComplex::realize(const Simplex& s) const {
    const auto k = static_cast<Eigen::Index>(s.size()) - 1;
    Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(k + 1, std::max<Eigen::Index>(k, 0));
    if (k <= 0) return coords;
    Eigen::MatrixXd gram(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            const double a = edge_length(s[0], s[static_cast<std::size_t>(i + 1)]);
            const double b = edge_length(s[0], s[static_cast<std::size_t>(j + 1)]);
            const double c = i == j ? 0.0 : edge_length(s[static_cast<std::size_t>(i + 1)],
                                                        s[static_cast<std::size_t>(j + 1)]);
            gram(i, j) = 0.5 * (a * a + b * b - c * c);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    coords.bottomRows(k) = eig.eigenvectors() * roots.asDiagonal();
    return coords;
}

double MetricComplex::inradius(const Simplex& s) const {
    const int k = static_cast<int>(s.size()) - 1;
    if (k <= 0) return 0.0;
    auto volume = [this](const Simplex& f) {
        const int dim = static_cast<int>(f.size()) - 1;
        if (dim == 0) return 1.0;
        const Eigen::MatrixXd P = realize(f);
        Eigen::MatrixXd edges = P.bottomRows(dim);  // rows relative to vertex 0 at origin
        const double det = (edges * edges.transpose()).determinant();
        return std::sqrt(std::max(det, 0.0)) / factorial(dim);
    };
    double facets = 0.0;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
        Simplex f = s;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
        facets += volume(f);
    }
    return k * volume(s) / facets;
}

double MetricComplex::min_inradius() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& s : maximal_)
        if (s.size() > 1) r = std::min(r, inradius(s));
    return r;
}

void MetricComplex::check_realizable() const {
    for (const auto& s : maximal_) {
        if (s.size() < 2) continue;
        const int k = static_cast<int>(s.size()) - 1;
        const double scale = min_edge_length(s);
        Eigen::MatrixXd gram(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                const double a = edge_length(s[0], s[static_cast<std::size_t>(i + 1)]);
                const double b = edge_length(s[0], s[static_cast<std::size_t>(j + 1)]);
                const double c = i == j ? 0.0 : edge_length(s[static_cast<std::size_t>(i + 1)],
                                                            s[static_cast<std::size_t>(j + 1)]);
                gram(i, j) = 0.5 * (a * a + b * b - c * c);
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() <= 1e-12 * scale * scale)
            throw Error(ErrorKind::InvalidInput,
                        "simplex " + to_string(s) + " is not a non-degenerate Euclidean simplex");
    }
}

bool MetricComplex::share_simplex(const ComplexPoint& p, const ComplexPoint& q) const {
    return contains(simplex_union(p.vertices, q.vertices));
}

double MetricComplex::distance_within(const ComplexPoint& p, const ComplexPoint& q) const {
    const Simplex support = simplex_union(p.vertices, q.vertices);
    if (!contains(support))
        throw Error(ErrorKind::InvalidInput, "points do not share a simplex: " + to_string(support));
    std::vector<double> delta(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) delta[i] = p.weight(support[i]) - q.weight(support[i]);
    // |x - y|^2 = -1/2 sum_ij delta_i delta_j l_ij^2 for sum(delta) = 0.
    double sq = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i)
        for (std::size_t j = i + 1; j < support.size(); ++j) {
            const double l = edge_length(support[i], support[j]);
            sq -= delta[i] * delta[j] * l * l;
        }
    return std::sqrt(std::max(sq, 0.0));
}

double MetricComplex::distance_to_face(const ComplexPoint& p, const Simplex& face) const {
    const Simplex support = simplex_union(p.vertices, face);
    if (!contains(support))
        throw Error(ErrorKind::InvalidInput, "point and face do not share a simplex");
    const Eigen::MatrixXd P = realize(support);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(P.cols());
    for (std::size_t i = 0; i < support.size(); ++i)
        x += p.weight(support[i]) * P.row(static_cast<Eigen::Index>(i)).transpose();
    std::vector<Eigen::Index> rows;
    for (int v : face)
        rows.push_back(std::lower_bound(support.begin(), support.end(), v) - support.begin());

    double best = std::numeric_limits<double>::infinity();
    const std::uint32_t full = (1u << face.size()) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        std::vector<Eigen::Index> sub;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (mask & (1u << i)) sub.push_back(rows[i]);
        const Eigen::VectorXd origin = P.row(sub[0]).transpose();
        if (sub.size() == 1) {
            best = std::min(best, (x - origin).norm());
            continue;
        }
        Eigen::MatrixXd A(P.cols(), static_cast<Eigen::Index>(sub.size()) - 1);
        for (std::size_t j = 1; j < sub.size(); ++j)
            A.col(static_cast<Eigen::Index>(j) - 1) = P.row(sub[j]).transpose() - origin;
        const Eigen::VectorXd c = (A.transpose() * A).ldlt().solve(A.transpose() * (x - origin));
        if (c.minCoeff() < -1e-12 || c.sum() > 1.0 + 1e-12) continue;  // projection outside the face
        best = std::min(best, (x - origin - A * c).norm());
    }
    return best;
}

double inradius(int n, double edge) {
    if (n < 1 || !(edge > 0.0)) throw Error(ErrorKind::Config, "inradius needs n >= 1 and edge > 0");
    return edge / std::sqrt(2.0 * n * (n + 1));
}

}  // namespace coarse
