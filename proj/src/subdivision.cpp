#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "coarse/complex.hpp"
#include "coarse/error.hpp"

namespace coarse {

ComplexGeodesics::ComplexGeodesics(const MetricComplex& K, int depth, std::vector<ComplexPoint> extra) {
    if (depth < 0) throw Error(ErrorKind::Config, "geodesic depth must be non-negative");
    const int n = K.vertex_count();
    groups_.assign(K.maximal_simplices().size(), {});
    auto place = [&](const ComplexPoint& p) {
        const auto containing = K.maximal_containing(p.carrier());
        if (containing.empty()) throw Error(ErrorKind::InvalidInput, "point does not lie in the complex");
        const std::size_t id = nodes_.size();
        nodes_.push_back(p);
        for (std::size_t m : containing) groups_[m].push_back(id);
    };
    for (int v = 0; v < n; ++v) place(ComplexPoint::vertex(v));
    const int steps = 1 << depth;
    for (const auto& s : K.simplices()) {
        if (s.size() != 2) continue;
        for (int j = 1; j < steps; ++j) {
            const double t = static_cast<double>(j) / steps;
            place(ComplexPoint::from_pairs({{s[0], 1.0 - t}, {s[1], t}}));
        }
    }
    first_extra_ = nodes_.size();
    for (auto& p : extra) place(p);

    adj_.assign(nodes_.size(), {});
    for (const auto& group : groups_)
        for (std::size_t a = 0; a < group.size(); ++a)
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                const double w = K.distance_within(nodes_[group[a]], nodes_[group[b]]);
                adj_[group[a]].emplace_back(group[b], w);
                adj_[group[b]].emplace_back(group[a], w);
            }
}

std::vector<double> ComplexGeodesics::relax(std::vector<double> dist) const {
    if (dist.size() != nodes_.size()) throw Error(ErrorKind::Config, "relax needs one value per node");
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (std::isfinite(dist[i])) heap.emplace(dist[i], i);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (const auto& [w, len] : adj_[u])
            if (d + len < dist[w]) {
                dist[w] = d + len;
                heap.emplace(dist[w], w);
            }
    }
    return dist;
}

std::vector<double> ComplexGeodesics::from(std::size_t source) const {
    std::vector<double> init(nodes_.size(), std::numeric_limits<double>::infinity());
    init.at(source) = 0.0;
    return relax(std::move(init));
}

double complex_distance(const MetricComplex& K, const ComplexPoint& p, const ComplexPoint& q, int depth) {
    if (!K.connected()) throw Error(ErrorKind::InvalidInput, "complex is disconnected");
    if (K.share_simplex(p, q)) return K.distance_within(p, q);
    const ComplexGeodesics G(K, depth, {p, q});
    return G.from(G.extra_node(0))[G.extra_node(1)];
}

namespace {

Subdivision subdivide_once(const MetricComplex& original, const MetricComplex& C,
                           const std::vector<ComplexPoint>& carrier) {
    const auto& faces = C.simplices();
    std::vector<ComplexPoint> next;
    next.reserve(faces.size());
    for (const auto& f : faces) {
        std::vector<std::pair<double, const ComplexPoint*>> terms;
        for (int v : f) terms.emplace_back(1.0 / static_cast<double>(f.size()), &carrier[static_cast<std::size_t>(v)]);
        next.push_back(affine_combination(terms));
    }
    // One top simplex per flag v0 < {v0,v1} < ... of each maximal simplex.
    std::vector<Simplex> tops;
    for (const auto& m : C.maximal_simplices()) {
        Simplex perm = m;
        do {
            Simplex flag;
            Simplex prefix;
            for (int v : perm) {
                prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), v), v);
                flag.push_back(static_cast<int>(*C.simplex_id(prefix)));
            }
            tops.push_back(make_simplex(flag));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    std::map<Edge, double> lengths;
    for (const auto& t : tops)
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = i + 1; j < t.size(); ++j) {
                const Edge e{t[i], t[j]};
                if (!lengths.count(e))
                    lengths[e] = original.distance_within(next[static_cast<std::size_t>(t[i])],
                                                          next[static_cast<std::size_t>(t[j])]);
            }
    auto complex = MetricComplex::euclidean(static_cast<int>(faces.size()), std::move(tops), lengths);
    return {std::move(complex), std::move(next), 0};
}

}  // namespace

Subdivision barycentric_subdivide(const MetricComplex& K, int times) {
    if (times < 0) throw Error(ErrorKind::Config, "subdivision count must be non-negative");
    std::vector<ComplexPoint> carrier;
    for (int v = 0; v < K.vertex_count(); ++v) carrier.push_back(ComplexPoint::vertex(v));
    Subdivision current{K, std::move(carrier), 0};
    for (int i = 0; i < times; ++i) {
        current = subdivide_once(K, current.complex, current.carrier);
        current.times = i + 1;
    }
    return current;
}

Uniformized uniformize(const MetricComplex& K) {
    if (K.kind() != MetricKind::C0) throw Error(ErrorKind::Config, "uniformize expects a c0 complex");
    std::vector<double> scale;
    for (const auto& m : K.maximal_simplices()) {
        int lo = K.level(m.front());
        for (int v : m) lo = std::min(lo, K.level(v));
        scale.push_back(std::ldexp(1.0, lo));
    }
    return {MetricComplex::uniform(K.vertex_count(), K.maximal_simplices(), 1.0), std::move(scale)};
}

}  // namespace coarse
