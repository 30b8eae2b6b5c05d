#include "coarse/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "coarse/error.hpp"

namespace coarse {

Graph random_regular(int n, int d, std::uint64_t seed) {
    if ((static_cast<long long>(n) * d) % 2 != 0)
        throw Error(ErrorKind::Config, "n * d must be even (n = " + std::to_string(n) + ", d = " +
                                           std::to_string(d) + ")");
    if (d < 3) throw Error(ErrorKind::Config, "degree must be at least 3");
    if (n <= d) throw Error(ErrorKind::Config, "need n > d");
    Rng rng(seed);
    const int cap = 10 * n;
    for (int attempt = 0; attempt < cap; ++attempt) {
        std::vector<int> stubs;
        for (int v = 0; v < n; ++v)
            for (int k = 0; k < d; ++k) stubs.push_back(v);
        std::set<Edge> edges;
        auto valid = [&](int u, int v) { return u != v && !edges.count({std::min(u, v), std::max(u, v)}); };
        bool dead = false;
        while (!stubs.empty() && !dead) {
            bool placed = false;
            for (int tries = 0; tries < 64 && !placed; ++tries) {
                const auto i = static_cast<std::size_t>(rng.below(stubs.size()));
                auto j = static_cast<std::size_t>(rng.below(stubs.size() - 1));
                if (j >= i) ++j;
                if (!valid(stubs[i], stubs[j])) continue;
                edges.insert({std::min(stubs[i], stubs[j]), std::max(stubs[i], stubs[j])});
                for (auto k : {std::max(i, j), std::min(i, j)}) {
                    stubs[k] = stubs.back();
                    stubs.pop_back();
                }
                placed = true;
            }
            if (placed) continue;
            dead = true;
            for (std::size_t i = 0; i < stubs.size() && dead; ++i)
                for (std::size_t j = i + 1; j < stubs.size() && dead; ++j)
                    if (valid(stubs[i], stubs[j])) dead = false;
        }
        if (dead) continue;
        Graph g(n, {edges.begin(), edges.end()}, d);
        if (g.connected()) return g;
    }
    throw Error(ErrorKind::InvalidInput, "random_regular: retry cap of " + std::to_string(cap) + " exceeded");
}

std::vector<int> vertex_boundary(const Graph& g, const std::vector<int>& A) {
    std::vector<char> in(static_cast<std::size_t>(g.size()), 0), mark(static_cast<std::size_t>(g.size()), 0);
    for (int v : A) {
        if (v < 0 || v >= g.size()) throw Error(ErrorKind::Config, "vertex out of range");
        in[static_cast<std::size_t>(v)] = 1;
    }
    for (int v : A)
        for (int w : g.neighbors(v))
            if (!in[static_cast<std::size_t>(w)]) mark[static_cast<std::size_t>(w)] = 1;
    std::vector<int> out;
    for (int v = 0; v < g.size(); ++v)
        if (mark[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
}

Spectrum laplacian_spectrum(const Graph& g) {
    if (!g.connected()) throw Error(ErrorKind::InvalidInput, "spectrum needs a connected graph");
    const int n = g.size();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [u, v] : g.edges()) {
        L(u, v) -= 1.0;
        L(v, u) -= 1.0;
        L(u, u) += 1.0;
        L(v, v) += 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::Assertion, "Laplacian eigensolve failed");
    return {eig.eigenvalues(), eig.eigenvectors()};
}

double lambda1(const Graph& g) {
    if (g.size() < 2) throw Error(ErrorKind::InvalidInput, "lambda1 needs at least two vertices");
    return laplacian_spectrum(g).lambda1();
}

double poincare_constant(const Graph& g, double lambda1) {
    return 2.0 * static_cast<double>(g.edges().size()) / ((g.size() - 1) * lambda1);
}

CheegerResult cheeger_constant(const Graph& g, int max_exact_n) {
    const int n = g.size();
    CheegerResult res;
    if (n < 2) throw Error(ErrorKind::InvalidInput, "Cheeger constant needs at least two vertices");
    if (n > std::min(max_exact_n, 30)) {
        const double l1 = lambda1(g);
        const double d = g.degree_bound();
        res.lower = l1 / (2.0 * d);
        res.upper = std::sqrt(2.0 * d * l1);
        return res;
    }
    // N(A) = low[A & 0xfff] | high[A >> 12] with 12-bit neighborhood tables.
    std::vector<std::uint32_t> nb(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v)
        for (int w : g.neighbors(v)) nb[static_cast<std::size_t>(v)] |= 1u << w;
    const int lo_bits = std::min(n, 12);
    const int hi_bits = n - lo_bits;
    auto table = [&](int offset, int bits) {
        std::vector<std::uint32_t> t(std::size_t{1} << bits, 0);
        for (std::size_t m = 1; m < t.size(); ++m) {
            const int low = std::countr_zero(m);
            t[m] = t[m & (m - 1)] | nb[static_cast<std::size_t>(offset + low)];
        }
        return t;
    };
    const auto low = table(0, lo_bits);
    const auto high = table(lo_bits, hi_bits);
    std::uint32_t best_b = 1, best_a = 0, best_set = 0;  // ratio best_b / best_a, starts at +inf
    const std::uint32_t lo_mask = (1u << lo_bits) - 1;
    for (std::uint32_t h = 0; h < high.size(); ++h) {
        const int hc = std::popcount(h);
        if (2 * hc > n) continue;
        for (std::uint32_t l = 0; l <= lo_mask; ++l) {
            const std::uint32_t A = l | (h << lo_bits);
            const auto a = static_cast<std::uint32_t>(hc + std::popcount(l));
            if (a == 0 || 2 * a > static_cast<std::uint32_t>(n)) continue;
            const auto b = static_cast<std::uint32_t>(std::popcount((low[l] | high[h]) & ~A));
            if (best_a == 0 || static_cast<std::uint64_t>(b) * best_a < static_cast<std::uint64_t>(best_b) * a) {
                best_b = b;
                best_a = a;
                best_set = A;
            }
        }
    }
    res.exact = true;
    res.lower = res.upper = static_cast<double>(best_b) / best_a;
    for (int v = 0; v < n; ++v)
        if (best_set & (1u << v)) res.witness.push_back(v);
    return res;
}

double poincare_ratio(const Graph& g, const VectorMap& f, double p) {
    if (f.rows() != g.size()) throw Error(ErrorKind::Config, "map needs one row per vertex");
    if (!(p >= 1.0)) throw Error(ErrorKind::Config, "p must be at least 1");
    auto power = [p](double dist) { return p == 2.0 ? dist * dist : std::pow(dist, p); };
    const auto n = f.rows();
    double pairs = 0.0;
    for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index y = x + 1; y < n; ++y) pairs += power((f.row(x) - f.row(y)).norm());
    double edges = 0.0;
    for (const auto& [u, v] : g.edges()) edges += power((f.row(u) - f.row(v)).norm());
    if (edges == 0.0) throw Error(ErrorKind::InvalidInput, "Poincare ratio undefined for a constant map");
    const double P = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const double E = static_cast<double>(g.edges().size());
    return (pairs / P) / (edges / E);
}

VectorMap random_vector_map(int n, int dim, Rng& rng) {
    VectorMap f(n, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < dim; ++j) f(i, j) = rng.uniform(-1.0, 1.0);
    return f;
}

LipschitzResult graph_map_lipschitz(const Graph& g, const VectorMap& f) {
    LipschitzResult best;
    for (const auto& [u, v] : g.edges()) {
        const double r = (f.row(u) - f.row(v)).norm();
        if (r > best.constant) best = {r, static_cast<std::size_t>(u), static_cast<std::size_t>(v)};
    }
    return best;
}

VectorMap normalize_lipschitz(const Graph& g, VectorMap f) {
    const double L = graph_map_lipschitz(g, f).constant;
    if (L > 0.0) f /= L;
    return f;
}

PoincareReport poincare_bound_check(const Graph& g, int trials, std::uint64_t seed) {
    if (trials < 1) throw Error(ErrorKind::Config, "trials must be at least 1");
    const Spectrum sp = laplacian_spectrum(g);
    PoincareReport rep;
    rep.lambda1 = sp.lambda1();
    rep.c0 = poincare_constant(g, rep.lambda1);
    rep.trials = trials;
    Rng rng = substream(seed, "poincare", static_cast<std::uint64_t>(g.size()));
    static constexpr int dims[] = {1, 2, 8};
    for (int t = 0; t < trials; ++t) {
        const double r = poincare_ratio(g, random_vector_map(g.size(), dims[t % 3], rng));
        rep.max_ratio = std::max(rep.max_ratio, r);
        if (r > rep.c0 * (1.0 + 1e-9)) ++rep.violations;
    }
    rep.eigen_ratio = poincare_ratio(g, sp.vectors.col(1));
    rep.attained = std::abs(rep.eigen_ratio - rep.c0) <= 1e-9 * rep.c0;
    return rep;
}

CorollaryResult lipschitz_bound_corollary(const Graph& g, const VectorMap& f, double c0) {
    const auto L = graph_map_lipschitz(g, f);
    if (L.constant > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "map is not 1-Lipschitz: |f(" << L.x << ") - f(" << L.y << ")| = " << L.constant;
        throw Error(ErrorKind::InvalidInput, os.str());
    }
    CorollaryResult res;
    const auto n = f.rows();
    double sum = 0.0;
    for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index y = x + 1; y < n; ++y) sum += (f.row(x) - f.row(y)).squaredNorm();
    res.value = sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
    res.c0 = c0;
    res.ok = res.value <= c0 * (1.0 + 1e-9);
    return res;
}

VectorMap spectral_embedding(const Graph& g, int k) {
    const Spectrum sp = laplacian_spectrum(g);
    k = std::max(1, std::min(k, g.size() - 1));
    return normalize_lipschitz(g, sp.vectors.middleCols(1, k));
}

ExpanderFamily family_from_graphs(std::vector<Graph> graphs, int max_exact_n) {
    if (graphs.empty()) throw Error(ErrorKind::Config, "family needs at least one member");
    ExpanderFamily fam;
    fam.conductance = std::numeric_limits<double>::infinity();
    fam.graphs = std::move(graphs);
    for (const Graph& g : fam.graphs) {
        fam.degree = std::max(fam.degree, g.degree_bound());
        fam.lambda1.push_back(lambda1(g));
        fam.cheeger.push_back(cheeger_constant(g, max_exact_n));
        fam.conductance = std::min(fam.conductance, fam.cheeger.back().lower);
        fam.c0 = std::max(fam.c0, poincare_constant(g, fam.lambda1.back()));
        if (fam.lambda1.back() < 0.1) fam.drift = true;
    }
    return fam;
}

ExpanderFamily make_family(const std::vector<int>& sizes, int d, std::uint64_t seed, int max_exact_n) {
    if (sizes.empty()) throw Error(ErrorKind::Config, "family needs at least one member");
    std::vector<Graph> graphs;
    for (std::size_t m = 0; m < sizes.size(); ++m) graphs.push_back(random_regular(sizes[m], d, substream_seed(seed, "gen", m)));
    return family_from_graphs(std::move(graphs), max_exact_n);
}

}  // namespace coarse
