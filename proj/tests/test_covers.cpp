#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "coarse/covers.hpp"
#include "coarse/error.hpp"
#include "coarse/spectral.hpp"

using namespace coarse;

namespace {

FiniteMetricSpace path3() { return graph_metric(path_graph(3)); }

bool is_arc(const std::vector<std::size_t>& set, std::size_t n) {
    if (set.size() == n) return true;
    std::vector<char> in(n, 0);
    for (auto x : set) in[x] = 1;
    std::size_t starts = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (in[i] && !in[(i + n - 1) % n]) ++starts;
    return starts == 1;
}

}  // namespace

TEST_CASE("cover statistics") {
    const auto X = path3();
    const auto c = make_cover(X, {{0, 1}, {1, 2}}, 1.0);
    const auto s = cover_stats(X, c);
    CHECK(s.mesh == 1.0);
    CHECK(s.multiplicity == 2);
    CHECK(s.lebesgue == 1.0);

    const auto whole = cover_stats(X, make_cover(X, {{0, 1, 2}}, 1.0));
    CHECK(whole.multiplicity == 1);
    CHECK(whole.lebesgue == whole.mesh);

    const auto part = cover_stats(X, make_cover(X, {{0}, {1, 2}}, 1.0));
    CHECK(part.multiplicity == 1);

    CHECK_THROWS_AS(make_cover(X, {{0, 1}}, 1.0), Error);     // misses a point
    CHECK_THROWS_AS(make_cover(X, {{0, 1, 2}, {}}, 1.0), Error);
    CHECK_THROWS_AS(make_cover(X, {{0, 5}, {1, 2}}, 1.0), Error);
}

TEST_CASE("complement distances") {
    const auto X = path3();
    const auto c = make_cover(X, {{0, 1}, {1, 2}}, 1.0);
    const auto t = complement_distances(X, c);
    CHECK(t[0][0] == 2.0);
    CHECK(t[0][1] == 0.0);
    CHECK(t[1][0] == 1.0);

    const auto P = graph_metric(path_graph(7));
    const auto mid = make_cover(P, {{1, 2, 3, 4, 5}, {0}, {6}}, 1.0);
    CHECK(complement_distances(P, mid)[3][0] == 3.0);

    const auto one = FiniteMetricSpace::from_matrix({0.0});
    CHECK_THROWS_AS(distance_coordinates(one, make_cover(one, {{0}}, 1.0)), Error);
}

TEST_CASE("greedy covers") {
    const auto C = graph_metric(cycle_graph(12));
    const auto c = greedy_cover(C, 2.0);
    const auto s = cover_stats(C, c);
    CHECK(s.multiplicity <= 2);
    for (const auto& set : c.sets) CHECK(is_arc(set, 12));
    CHECK(s.mesh <= 3 * 2.0);

    const auto one = FiniteMetricSpace::from_matrix({0.0});
    const auto c1 = greedy_cover(one, 1.0);
    REQUIRE(c1.sets.size() == 1);
    CHECK(c1.sets[0] == std::vector<std::size_t>{0});

    const auto K5 = graph_metric(complete_graph(5));
    const auto c5 = greedy_cover(K5, 1.0);
    CHECK(c5.sets.size() == 1);
    CHECK(cover_stats(K5, c5).multiplicity == 1);
}

TEST_CASE("property: greedy covers have mesh at most 3 lambda and cover every point") {
    Rng rng(3);
    for (int t = 0; t < 12; ++t) {
        const Graph g = random_regular(20 + 2 * static_cast<int>(rng.below(20)), 3, rng.next());
        const auto X = graph_metric(g);
        const double lambda = 1.0 + static_cast<double>(rng.below(4));
        const auto c = greedy_cover(X, lambda, 1 + static_cast<int>(rng.below(2)));
        CHECK(cover_stats(X, c).mesh <= 3 * lambda);
        std::set<std::size_t> seen;
        for (const auto& s : c.sets) seen.insert(s.begin(), s.end());
        CHECK(seen.size() == X.size());
    }
}

TEST_CASE("nerve of a path cover") {
    const auto X = path3();
    const auto n = build_nerve(X, make_cover(X, {{0, 1}, {1, 2}}, 1.0));
    CHECK(n.vertex_count == 2);
    CHECK(n.dimension == 1);
    CHECK(n.carrier.at({0, 1}) == std::vector<std::size_t>{1});
    CHECK(n.carrier.at({0}) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("nerve projection on small covers") {
    const auto X = path3();
    const auto c = make_cover(X, {{0, 1}, {1, 2}}, 1.0);
    const auto p = nerve_projection(X, c, 0.5);
    CHECK(p.image[0] == ComplexPoint::vertex(0));
    CHECK(p.image[1].weight(0) == doctest::Approx(0.5));
    CHECK(p.image[1].weight(1) == doctest::Approx(0.5));
    try {
        nerve_projection(X, c, 0.75);
        FAIL("expected a precondition error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidInput);
        CHECK(std::string(e.what()).find("Lebesgue") != std::string::npos);
    }
}

TEST_CASE("nerve constants") {
    CHECK(nerve_constant(0) == 1.0);
    double prev = 1.0;
    for (int n = 1; n <= 5; ++n) {
        const double c = nerve_constant(n);
        const double analytic = std::sqrt(2.0 / (n * (n + 1.0)));
        CHECK(c <= analytic + 1e-12);
        CHECK(c >= 0.95 * analytic);
        CHECK(c <= prev);
        prev = c;
        // Independent sampling: sup-norm distance on the sphere dominates the Euclidean chord.
        Rng rng(100 + static_cast<std::uint64_t>(n));
        const std::size_t k = static_cast<std::size_t>(n) + 1;
        for (int t = 0; t < 2000; ++t) {
            std::vector<double> a(k), b(k);
            for (auto* v : {&a, &b}) {
                double s = 0.0;
                for (auto& x : *v) s += (x = rng.exponential());
                for (auto& x : *v) x /= s;
            }
            const double ma = *std::max_element(a.begin(), a.end()), mb = *std::max_element(b.begin(), b.end());
            double sup = 0.0, sq = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                sup = std::max(sup, std::abs(a[i] / ma - b[i] / mb));
                sq += (a[i] - b[i]) * (a[i] - b[i]);
            }
            CHECK(c * std::sqrt(sq / 2.0) <= sup + 1e-12);
        }
    }
}

TEST_CASE("cycle arc cover projects 1-Lipschitz (exact cycle metric oracle)") {
    const std::size_t n = 24;
    const auto X = graph_metric(cycle_graph(static_cast<int>(n)));
    const auto c = greedy_cover(X, 2.0);
    const auto s = cover_stats(X, c);
    REQUIRE(s.lebesgue > 1.0);
    const auto p = nerve_projection(X, c, s.lebesgue / 2);
    REQUIRE(p.nerve.dimension == 1);
    // The nerve is a cycle of k edges; order its vertices around it.
    const int k = p.nerve.vertex_count;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(k));
    for (const auto& g : p.nerve.generators)
        if (g.size() == 2) {
            adj[static_cast<std::size_t>(g[0])].push_back(g[1]);
            adj[static_cast<std::size_t>(g[1])].push_back(g[0]);
        }
    std::vector<int> pos(static_cast<std::size_t>(k), -1);
    int prev = -1, cur = 0;
    for (int i = 0; i < k; ++i) {
        pos[static_cast<std::size_t>(cur)] = i;
        const auto& nb = adj[static_cast<std::size_t>(cur)];
        REQUIRE(nb.size() == 2);
        const int next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
    }
    const double edge = p.complex.uniform_size();
    auto coordinate = [&](const ComplexPoint& q) {
        if (q.vertices.size() == 1) return static_cast<double>(pos[static_cast<std::size_t>(q.vertices[0])]);
        const int a = pos[static_cast<std::size_t>(q.vertices[0])], b = pos[static_cast<std::size_t>(q.vertices[1])];
        const bool forward = (a + 1) % k == b;
        return forward ? a + q.weights[1] : b + q.weights[0];
    };
    double worst = 0.0;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            const double delta = std::abs(coordinate(p.image[x]) - coordinate(p.image[y]));
            const double along = std::min(delta, k - delta) * edge;
            worst = std::max(worst, along / X(x, y));
        }
    CHECK(worst <= 1.0 + 1e-9);
    CHECK(projection_lipschitz(X, p).nerve.constant == doctest::Approx(worst).epsilon(1e-9));
}

TEST_CASE("property: nerve projection is 1-Lipschitz when Lebesgue exceeds the edge length") {
    Rng rng(21);
    int tested = 0;
    for (int t = 0; t < 30 && tested < 10; ++t) {
        const Graph g = random_regular(16 + 4 * static_cast<int>(rng.below(12)), 3 + static_cast<int>(rng.below(2)), rng.next());
        const auto X = graph_metric(g);
        const auto c = greedy_cover(X, 2.0 + static_cast<double>(rng.below(3)));
        const auto s = cover_stats(X, c);
        if (!(s.lebesgue > 1.0)) continue;
        ++tested;
        const auto p = nerve_projection(X, c, s.lebesgue / 2);
        const auto lip = projection_lipschitz(X, p);
        CHECK(lip.nerve.constant <= 1.0 + 1e-9);
        CHECK(lip.sphere.constant <= 1.0 + 1e-9);
        CHECK(cobounded_check(X, p, s.mesh).ok);
    }
    CHECK(tested >= 5);
}

TEST_CASE("Lebesgue number equal to the edge length allows L above 1") {
    const Graph g = random_regular(128, 4, substream_seed(7, "gen", 3));
    const auto X = graph_metric(g);
    const auto c = greedy_cover(X, 1.0);
    const auto s = cover_stats(X, c);
    REQUIRE(s.lebesgue == 1.0);
    const auto p = nerve_projection(X, c, 0.5);
    const auto lip = projection_lipschitz(X, p);
    CHECK(lip.nerve.constant > 1.0);
    CHECK(X(lip.nerve.x, lip.nerve.y) == 1.0);
    CHECK_FALSE(p.complex.share_simplex(p.image[lip.nerve.x], p.image[lip.nerve.y]));
    CHECK(lip.sphere.constant <= 1.0);
}

TEST_CASE("cobounded check") {
    const auto X = graph_metric(path_graph(6));
    const auto c = make_cover(X, {{0, 1, 2}, {2, 3, 4}, {4, 5}}, 1.0);
    const auto s = cover_stats(X, c);
    const auto p = nerve_projection(X, c, s.lebesgue / 2);
    const auto ok = cobounded_check(X, p, s.mesh);
    CHECK(ok.ok);
    CHECK(ok.checked < p.nerve.carrier.size() + 1);
    CHECK_FALSE(cobounded_check(X, p, 0.0).ok);
}
