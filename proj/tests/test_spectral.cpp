#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "coarse/error.hpp"
#include "coarse/spectral.hpp"

using namespace coarse;

namespace {

// min |dA|/|A| over all subsets with 0 < |A| <= n/2, boundary counted by hand.
double brute_cheeger(const Graph& g) {
    const int n = g.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const int size = __builtin_popcount(mask);
        if (2 * size > n) continue;
        int boundary = 0;
        for (int v = 0; v < n; ++v) {
            if (mask >> v & 1u) continue;
            for (int u = 0; u < n; ++u)
                if ((mask >> u & 1u) && g.adjacent(u, v)) {
                    ++boundary;
                    break;
                }
        }
        best = std::min(best, static_cast<double>(boundary) / size);
    }
    return best;
}

// Direct double sums over pairs and edges.
double direct_ratio(const Graph& g, const VectorMap& f) {
    const int n = g.size();
    double pairs = 0.0, edges = 0.0;
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) pairs += (f.row(x) - f.row(y)).squaredNorm();
    for (const auto& [u, v] : g.edges()) edges += (f.row(u) - f.row(v)).squaredNorm();
    const double P = n * (n - 1) / 2.0, E = static_cast<double>(g.edges().size());
    return (pairs / P) / (edges / E);
}

bool simple_regular(const Graph& g, int d) {
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : g.edges()) {
        if (u == v) return false;
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second) return false;
    }
    for (int v = 0; v < g.size(); ++v)
        if (g.degree(v) != d) return false;
    return true;
}

}  // namespace

TEST_CASE("random regular graphs") {
    const Graph g = random_regular(8, 3, 42);
    CHECK(g.edges().size() == 12);
    CHECK(simple_regular(g, 3));
    CHECK(g.connected());
    CHECK(random_regular(8, 3, 42).edges() == g.edges());
    try {
        random_regular(5, 3, 1);
        FAIL("expected a parity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
    }
}

TEST_CASE("property: random regular output is simple, regular and connected") {
    for (auto [n, d] : {std::pair{16, 3}, std::pair{32, 4}, std::pair{64, 4}})
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const Graph g = random_regular(n, d, seed);
            CHECK(g.size() == n);
            CHECK(simple_regular(g, d));
            CHECK(g.connected());
        }
}

TEST_CASE("vertex boundary") {
    CHECK(vertex_boundary(path_graph(3), {1}) == std::vector<int>{0, 2});
    CHECK(vertex_boundary(cycle_graph(5), {0, 1, 2, 3, 4}).empty());
    CHECK(vertex_boundary(cycle_graph(8), {2, 3, 4, 5}) == std::vector<int>{1, 6});
}

TEST_CASE("exact Cheeger constants against brute force") {
    const auto k4 = cheeger_constant(complete_graph(4));
    CHECK(k4.exact);
    CHECK(k4.value() == doctest::Approx(1.0));
    CHECK(k4.value() == doctest::Approx(brute_cheeger(complete_graph(4))));
    CHECK(cheeger_constant(cycle_graph(8)).value() == doctest::Approx(0.5));
    CHECK(brute_cheeger(cycle_graph(8)) == doctest::Approx(0.5));
    const auto bar = cheeger_constant(barbell_triangles());
    CHECK(bar.value() == doctest::Approx(1.0 / 3));
    CHECK(brute_cheeger(barbell_triangles()) == doctest::Approx(1.0 / 3));
    const auto w = bar.witness;
    CHECK(static_cast<double>(vertex_boundary(barbell_triangles(), w).size()) / w.size() == doctest::Approx(1.0 / 3));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = random_regular(14, 3, seed);
        CHECK(cheeger_constant(g).value() == doctest::Approx(brute_cheeger(g)));
    }
}

TEST_CASE("Cheeger interval outside the exact regime") {
    const Graph g = random_regular(40, 4, 3);
    const auto c = cheeger_constant(g);
    CHECK_FALSE(c.exact);
    CHECK(std::string(c.method()) == "spectral");
    const double l1 = lambda1(g);
    CHECK(c.lower == doctest::Approx(l1 / 8));
    CHECK(c.upper == doctest::Approx(std::sqrt(8 * l1)));
}

TEST_CASE("Laplacian spectra match closed forms") {
    for (int n : {4, 6, 9, 12}) {
        const auto s = laplacian_spectrum(cycle_graph(n));
        std::vector<double> oracle;
        for (int k = 0; k < n; ++k) oracle.push_back(2 - 2 * std::cos(2 * M_PI * k / n));
        std::sort(oracle.begin(), oracle.end());
        for (int k = 0; k < n; ++k) CHECK(s.values(k) == doctest::Approx(oracle[static_cast<std::size_t>(k)]).epsilon(1e-12));
    }
    CHECK(lambda1(cycle_graph(4)) == doctest::Approx(2.0));
    CHECK(lambda1(cycle_graph(6)) == doctest::Approx(1.0));
    for (int n : {3, 4, 7}) CHECK(lambda1(complete_graph(n)) == doctest::Approx(n));
    // Eigenvector of lambda1 is centred and satisfies L f = lambda1 f.
    const Graph g = random_regular(20, 3, 5);
    const auto s = laplacian_spectrum(g);
    const Eigen::VectorXd f = s.vectors.col(1);
    CHECK(std::abs(f.sum()) < 1e-9);
    for (int v = 0; v < g.size(); ++v) {
        double lf = g.degree(v) * f(v);
        for (int u : g.neighbors(v)) lf -= f(u);
        CHECK(lf == doctest::Approx(s.lambda1() * f(v)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(lambda1(Graph(4, {{0, 1}, {2, 3}}, 1)), Error);
}

TEST_CASE("Poincare ratio") {
    const Graph g = random_regular(16, 3, 9);
    const auto s = laplacian_spectrum(g);
    const VectorMap eig = s.vectors.col(1);
    const double c0 = poincare_constant(g, s.lambda1());
    CHECK(c0 == doctest::Approx(3.0 * 16 / (15 * s.lambda1())));
    CHECK(poincare_ratio(g, eig) == doctest::Approx(c0).epsilon(1e-9));
    CHECK(direct_ratio(g, eig) == doctest::Approx(c0).epsilon(1e-9));

    const Graph k4 = complete_graph(4);
    VectorMap ind = VectorMap::Zero(4, 1);
    ind(2, 0) = 1.0;
    CHECK(poincare_ratio(k4, ind) == doctest::Approx(1.0));
    CHECK(poincare_constant(k4, lambda1(k4)) == doctest::Approx(1.0));

    Rng rng(4);
    const VectorMap f = random_vector_map(16, 1, rng);
    CHECK(poincare_ratio(g, 5.0 * f) == doctest::Approx(poincare_ratio(g, f)));
    VectorMap twice(16, 2);
    twice << f, f;
    CHECK(poincare_ratio(g, twice) == doctest::Approx(poincare_ratio(g, f)));
    CHECK(poincare_ratio(g, f) == doctest::Approx(direct_ratio(g, f)));
    CHECK(poincare_ratio(g, f, 1.0) > 0.0);
    CHECK_THROWS_AS(poincare_ratio(g, VectorMap::Ones(16, 2)), Error);
}

TEST_CASE("property: Poincare ratio invariances") {
    const Graph g = random_regular(18, 4, 2);
    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        const VectorMap f = random_vector_map(18, 2, rng);
        const double r = poincare_ratio(g, f);
        VectorMap shifted = f;
        shifted.rowwise() += Eigen::RowVector2d(3.0, -1.5);
        CHECK(poincare_ratio(g, shifted) == doctest::Approx(r));
        const double a = rng.uniform(0.0, 2 * M_PI);
        Eigen::Matrix2d rot;
        rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        CHECK(poincare_ratio(g, f * rot) == doctest::Approx(r));
        CHECK(poincare_ratio(g, 0.01 * f) == doctest::Approx(r));
    }
}

TEST_CASE("Poincare bound check") {
    const auto c6 = poincare_bound_check(cycle_graph(6), 1000, 1);
    CHECK(c6.lambda1 == doctest::Approx(1.0));
    CHECK(c6.c0 == doctest::Approx(2.4));
    CHECK(c6.violations == 0);
    CHECK(c6.max_ratio <= 2.4 + 1e-9);
    CHECK(c6.ok());
    const auto k4 = poincare_bound_check(complete_graph(4), 200, 1);
    CHECK(k4.c0 == doctest::Approx(1.0));
    CHECK(k4.ok());
}

TEST_CASE("property: D^2 stays below c0 for random maps") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Graph g = random_regular(20 + 4 * static_cast<int>(seed), 4, seed);
        const double c0 = poincare_constant(g, lambda1(g));
        Rng rng(seed + 50);
        for (int t = 0; t < 1000; ++t) {
            const int dim = t % 3 == 0 ? 1 : (t % 3 == 1 ? 2 : 8);
            CHECK(direct_ratio(g, random_vector_map(g.size(), dim, rng)) <= c0 * (1 + 1e-9));
        }
    }
}

TEST_CASE("mean square displacement of 1-Lipschitz maps") {
    const Graph g = random_regular(24, 3, 6);
    const double c0 = poincare_constant(g, lambda1(g));
    const auto zero = lipschitz_bound_corollary(g, VectorMap::Zero(24, 3), c0);
    CHECK(zero.value == 0.0);
    CHECK(zero.ok);

    const auto eig = normalize_lipschitz(g, laplacian_spectrum(g).vectors.col(1));
    CHECK(graph_map_lipschitz(g, eig).constant == doctest::Approx(1.0));
    CHECK(lipschitz_bound_corollary(g, eig, c0).ok);

    const auto dist = g.bfs(0);
    VectorMap h(24, 1);
    double sum = 0.0;
    for (int v = 0; v < 24; ++v) h(v, 0) = dist[static_cast<std::size_t>(v)];
    for (int x = 0; x < 24; ++x)
        for (int y = x + 1; y < 24; ++y) sum += std::pow(h(x, 0) - h(y, 0), 2);
    const auto r = lipschitz_bound_corollary(g, h, c0);
    CHECK(r.value == doctest::Approx(sum / (24 * 23 / 2.0)));
    CHECK(r.ok);

    try {
        lipschitz_bound_corollary(g, 2.0 * h, c0);
        FAIL("expected a Lipschitz error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidInput);
    }
}

TEST_CASE("property: exact Cheeger and lambda1 satisfy the vertex-boundary inequalities") {
    std::vector<Graph> graphs{cycle_graph(8), cycle_graph(11), path_graph(7), barbell_triangles(), grid_graph(3, 4)};
    for (std::uint64_t seed = 0; seed < 6; ++seed) graphs.push_back(random_regular(10 + 2 * static_cast<int>(seed), 3, seed));
    for (const auto& g : graphs) {
        const auto c = cheeger_constant(g);
        REQUIRE(c.exact);
        const double h = c.value(), l1 = lambda1(g), d = g.degree_bound();
        CHECK(h * h / (2 * d) <= l1 + 1e-12);
        CHECK(l1 <= 2 * d * h + 1e-12);
    }
    // Complete graphs break the sharper upper form lambda1 <= 2h.
    CHECK(lambda1(complete_graph(4)) > 2 * cheeger_constant(complete_graph(4)).value());
}

TEST_CASE("family statistics") {
    const auto fam = make_family({16, 32, 64}, 4, 7);
    CHECK(fam.degree == 4);
    REQUIRE(fam.graphs.size() == 3);
    CHECK(fam.cheeger[0].exact);
    CHECK_FALSE(fam.cheeger[2].exact);
    double c0 = 0.0;
    for (std::size_t i = 0; i < 3; ++i) c0 = std::max(c0, poincare_constant(fam.graphs[i], fam.lambda1[i]));
    CHECK(fam.c0 == doctest::Approx(c0));
    CHECK(fam.conductance > 0.0);
    CHECK_FALSE(fam.drift);
    const auto again = make_family({16, 32, 64}, 4, 7);
    for (std::size_t i = 0; i < 3; ++i) CHECK(again.graphs[i].edges() == fam.graphs[i].edges());
    const auto paths = family_from_graphs({path_graph(30)});
    CHECK(paths.drift);
}
