#include "coarse/covers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "coarse/error.hpp"
#include "coarse/rng.hpp"

namespace coarse {

Cover make_cover(const FiniteMetricSpace& space, std::vector<std::vector<std::size_t>> sets, double lambda) {
    if (!(lambda > 0.0)) throw Error(ErrorKind::Config, "cover scale must be positive");
    std::vector<char> covered(space.size(), 0);
    for (auto& s : sets) {
        if (s.empty()) throw Error(ErrorKind::InvalidInput, "cover contains an empty set");
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (s.back() >= space.size()) throw Error(ErrorKind::InvalidInput, "cover set uses unknown point");
        for (auto x : s) covered[x] = 1;
    }
    for (std::size_t x = 0; x < space.size(); ++x)
        if (!covered[x])
            throw Error(ErrorKind::InvalidInput, "point " + space.point_ids()[x] + " is not covered");
    return {lambda, std::move(sets)};
}

namespace {

double set_diameter(const FiniteMetricSpace& space, const std::vector<std::size_t>& s) {
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) d = std::max(d, space(s[i], s[j]));
    return d;
}

double mesh_of(const FiniteMetricSpace& space, const Cover& cover) {
    double m = 0.0;
    for (const auto& s : cover.sets) m = std::max(m, set_diameter(space, s));
    return m;
}

}  // namespace

std::vector<std::vector<double>> complement_distances(const FiniteMetricSpace& space, const Cover& cover) {
    const std::size_t n = space.size();
    const double mesh = mesh_of(space, cover);
    std::vector<std::vector<double>> t(n, std::vector<double>(cover.sets.size(), 0.0));
    std::vector<char> inside(n);
    for (std::size_t u = 0; u < cover.sets.size(); ++u) {
        const auto& s = cover.sets[u];
        if (s.size() == n) {
            for (std::size_t x = 0; x < n; ++x) t[x][u] = mesh;
            continue;
        }
        std::fill(inside.begin(), inside.end(), 0);
        for (auto x : s) inside[x] = 1;
        for (auto x : s) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t y = 0; y < n; ++y)
                if (!inside[y]) best = std::min(best, space(x, y));
            t[x][u] = best;
        }
    }
    return t;
}

CoverStats cover_stats(const FiniteMetricSpace& space, const Cover& cover) {
    CoverStats st;
    st.mesh = mesh_of(space, cover);
    const auto t = complement_distances(space, cover);
    st.lebesgue = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < space.size(); ++x) {
        st.lebesgue = std::min(st.lebesgue, *std::max_element(t[x].begin(), t[x].end()));
        int count = 0;
        for (const auto& s : cover.sets) count += std::binary_search(s.begin(), s.end(), x) ? 1 : 0;
        st.multiplicity = std::max(st.multiplicity, count);
    }
    return st;
}

Cover greedy_cover(const FiniteMetricSpace& space, double lambda, int passes) {
    if (!(lambda > 0.0)) throw Error(ErrorKind::Config, "cover scale must be positive");
    if (passes < 0) throw Error(ErrorKind::Config, "enlargement passes must be non-negative");
    const std::size_t n = space.size();
    std::vector<std::size_t> centers;
    for (std::size_t x = 0; x < n; ++x) {
        bool far = true;
        for (auto c : centers) far = far && space(x, c) > lambda;
        if (far) centers.push_back(x);
    }
    std::vector<std::vector<std::size_t>> sets;
    for (auto c : centers) sets.push_back(ball(space, c, lambda));
    Cover cover = make_cover(space, std::move(sets), lambda);

    for (int pass = 0; pass < passes; ++pass) {
        const auto t = complement_distances(space, cover);
        bool changed = false;
        for (std::size_t x = 0; x < n; ++x) {
            if (*std::max_element(t[x].begin(), t[x].end()) >= lambda / 2) continue;
            std::size_t home = 0;
            for (std::size_t k = 1; k < centers.size(); ++k)
                if (space(x, centers[k]) < space(x, centers[home])) home = k;
            auto& s = cover.sets[home];
            for (std::size_t y = 0; y < n; ++y)
                if (space(x, y) < lambda / 2) s.push_back(y);
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            changed = true;
        }
        if (!changed) break;
    }
    return cover;
}

std::vector<std::vector<double>> distance_coordinates(const FiniteMetricSpace& space, const Cover& cover) {
    auto t = complement_distances(space, cover);
    for (std::size_t x = 0; x < space.size(); ++x)
        if (*std::max_element(t[x].begin(), t[x].end()) <= 0.0)
            throw Error(ErrorKind::InvalidInput, "Lebesgue number is 0: point " + space.point_ids()[x] +
                                                     " lies on the boundary of every set containing it");
    return t;
}

Nerve build_nerve(const FiniteMetricSpace& space, const Cover& cover) {
    Nerve nerve;
    nerve.vertex_count = static_cast<int>(cover.sets.size());
    std::vector<Simplex> memberships(space.size());
    for (std::size_t u = 0; u < cover.sets.size(); ++u)
        for (auto x : cover.sets[u]) memberships[x].push_back(static_cast<int>(u));
    for (std::size_t x = 0; x < space.size(); ++x) {
        const Simplex& s = memberships[x];
        if (s.size() > 20) throw Error(ErrorKind::InvalidInput, "cover multiplicity too large for a nerve");
        nerve.dimension = std::max(nerve.dimension, static_cast<int>(s.size()) - 1);
        if (std::find(nerve.generators.begin(), nerve.generators.end(), s) == nerve.generators.end())
            nerve.generators.push_back(s);
        const std::uint32_t full = (1u << s.size()) - 1;
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            Simplex f;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (mask & (1u << i)) f.push_back(s[i]);
            nerve.carrier[f].push_back(x);
        }
    }
    std::sort(nerve.generators.begin(), nerve.generators.end());
    return nerve;
}

double nerve_constant(int n) {
    if (n < 0) throw Error(ErrorKind::Config, "negative nerve dimension");
    if (n == 0) return 1.0;
    static std::mutex mutex;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    const auto k = static_cast<std::size_t>(n) + 1;
    Rng rng = substream(0x5eed, "nerve-constant", static_cast<std::uint64_t>(n));
    std::vector<double> b(k), c(k), v(k), w(k);
    auto sphere = [](const std::vector<double>& bary, std::vector<double>& out) {
        const double m = *std::max_element(bary.begin(), bary.end());
        for (std::size_t i = 0; i < bary.size(); ++i) out[i] = bary[i] / m;
    };
    auto normalize = [](std::vector<double>& x) {
        double s = 0.0;
        for (double& e : x) s += (e = std::max(e, 0.0));
        for (double& e : x) e /= s;
    };
    double best = std::numeric_limits<double>::infinity();
    auto ratio = [&]() {
        sphere(b, v);
        sphere(c, w);
        double sup = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            sup = std::max(sup, std::abs(v[i] - w[i]));
            sq += (b[i] - c[i]) * (b[i] - c[i]);
        }
        // Euclidean distance in the simplex of unit edge is |b - c|_2 / sqrt(2).
        if (sq > 1e-28) best = std::min(best, sup / std::sqrt(sq / 2.0));
    };
    auto dirichlet = [&](std::vector<double>& x) {
        for (double& e : x) e = rng.exponential();
        normalize(x);
    };
    for (int trial = 0; trial < 20000; ++trial) {
        dirichlet(b);
        dirichlet(c);
        ratio();
    }
    for (int trial = 0; trial < 20000; ++trial) {
        const double eps = std::pow(10.0, rng.uniform(-6.0, -1.0));
        if (trial % 2 == 0) {
            dirichlet(b);
        } else {
            // near a vertex
            std::fill(b.begin(), b.end(), 0.0);
            const auto top = rng.below(k);
            for (std::size_t i = 0; i < k; ++i) b[i] = i == top ? 1.0 : eps * rng.uniform();
            normalize(b);
        }
        c = b;
        if (trial % 4 < 2) {
            const auto top = static_cast<std::size_t>(std::max_element(b.begin(), b.end()) - b.begin());
            for (std::size_t i = 0; i < k; ++i)
                if (i != top) c[i] += eps;  // equal increments away from the dominant vertex
        } else {
            for (double& e : c) e += eps * rng.uniform(-1.0, 1.0);
        }
        normalize(c);
        ratio();
    }
    const double value = 0.99 * best;
    cache.emplace(n, value);
    return value;
}

NerveProjection nerve_projection(const FiniteMetricSpace& space, const Cover& cover, double scale) {
    if (!(scale > 0.0)) throw Error(ErrorKind::Config, "projection scale must be positive");
    const CoverStats st = cover_stats(space, cover);
    if (st.lebesgue < 2.0 * scale) {
        std::ostringstream os;
        os << "Lebesgue number " << st.lebesgue << " is below 2 * scale = " << 2.0 * scale;
        throw Error(ErrorKind::InvalidInput, os.str());
    }
    const auto t = distance_coordinates(space, cover);
    Nerve nerve = build_nerve(space, cover);
    const double cn = nerve_constant(nerve.dimension);
    auto complex = MetricComplex::uniform(nerve.vertex_count, nerve.generators, cn * scale);
    NerveProjection p{scale, cn, std::move(nerve), std::move(complex), {}, {}};
    for (std::size_t x = 0; x < space.size(); ++x) {
        const double top = *std::max_element(t[x].begin(), t[x].end());
        std::vector<double> v(t[x].size());
        std::vector<std::pair<int, double>> pairs;
        for (std::size_t u = 0; u < v.size(); ++u) {
            v[u] = scale * t[x][u] / top;
            if (v[u] > 0.0) pairs.emplace_back(static_cast<int>(u), v[u]);
        }
        p.sphere.push_back(std::move(v));
        p.image.push_back(ComplexPoint::from_pairs(std::move(pairs)));
    }
    return p;
}

ProjectionLipschitz projection_lipschitz(const FiniteMetricSpace& space, const NerveProjection& p, int depth) {
    ProjectionLipschitz out;
    out.sphere = lipschitz_constant(space, [&](std::size_t x, std::size_t y) {
        double sup = 0.0;
        for (std::size_t u = 0; u < p.sphere[x].size(); ++u)
            sup = std::max(sup, std::abs(p.sphere[x][u] - p.sphere[y][u]));
        return sup;
    });
    const ComplexGeodesics G(p.complex, depth, p.image);
    std::vector<std::vector<double>> dist(space.size());
    for (std::size_t x = 0; x < space.size(); ++x) dist[x] = G.from(G.extra_node(x));
    out.nerve = lipschitz_constant(space, [&](std::size_t x, std::size_t y) {
        if (p.complex.share_simplex(p.image[x], p.image[y]))
            return p.complex.distance_within(p.image[x], p.image[y]);
        return dist[x][G.extra_node(y)];
    });
    return out;
}

CoboundedResult cobounded_check(const FiniteMetricSpace& space, const NerveProjection& p, double bound) {
    std::map<Simplex, std::vector<std::size_t>> preimage;
    for (std::size_t x = 0; x < space.size(); ++x) preimage[p.image[x].carrier()].push_back(x);
    CoboundedResult res;
    for (const auto& [s, pts] : preimage) {
        ++res.checked;
        const double d = set_diameter(space, pts);
        if (d > res.worst_diameter || res.worst_simplex.empty()) {
            res.worst_diameter = d;
            res.worst_simplex = s;
        }
    }
    res.ok = res.worst_diameter <= bound;
    return res;
}

}  // namespace coarse
