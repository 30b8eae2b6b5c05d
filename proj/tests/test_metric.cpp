#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "coarse/error.hpp"
#include "coarse/metric.hpp"
#include "coarse/rng.hpp"
#include "coarse/spectral.hpp"

using namespace coarse;

namespace {

// Floyd-Warshall over the adjacency relation.
std::vector<double> floyd(const Graph& g) {
    const auto n = static_cast<std::size_t>(g.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(n * n, inf);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
    for (const auto& [u, v] : g.edges()) d[u * n + v] = d[v * n + u] = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    return d;
}

}  // namespace

TEST_CASE("graph metric on small graphs") {
    const auto P = graph_metric(path_graph(3));
    CHECK(P(0, 2) == 2.0);
    const auto C = graph_metric(cycle_graph(4));
    CHECK(C(0, 2) == 2.0);
    CHECK(C(1, 3) == 2.0);
    const auto K = graph_metric(complete_graph(5));
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(K(i, j) == (i == j ? 0.0 : 1.0));
}

TEST_CASE("graph metric agrees with Floyd-Warshall on random regular graphs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Graph g = random_regular(30, 3, seed);
        const auto X = graph_metric(g);
        const auto oracle = floyd(g);
        CHECK(X.matrix() == oracle);
    }
}

TEST_CASE("disconnected graph is rejected with a separated pair") {
    const Graph g(4, {{0, 1}, {2, 3}}, 1);
    CHECK_FALSE(g.connected());
    REQUIRE(g.separated_pair().has_value());
    CHECK(g.separated_pair()->second == 2);
    try {
        graph_metric(g);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidInput);
    }
}

TEST_CASE("metric validation") {
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({0, 1, 2, 0}), Error);          // asymmetric
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({0, 0, 0, 0}), Error);          // zero distance
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({0, 1, 5, 1, 0, 1, 5, 1, 0}), Error);  // triangle
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({0, 1, 1, 0}, 2), Error);       // base
    CHECK_THROWS_AS(FiniteMetricSpace({"a", "a"}, {0, 1, 1, 0}), Error);           // duplicate ids
    const auto X = FiniteMetricSpace({"a", "b", "c"}, {0, 1, 2, 1, 0, 1, 2, 1, 0}, 1);
    CHECK(X.norm(0) == 1.0);
    CHECK(X.index_of("c") == 2);
    CHECK(X.diameter() == 2.0);
}

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(Graph(3, {{0, 0}}, 2), Error);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}, 2), Error);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}, 2), Error);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {0, 2}}, 1), Error);
}

TEST_CASE("Lipschitz constants") {
    const auto X = graph_metric(path_graph(5));
    std::vector<std::size_t> id{0, 1, 2, 3, 4}, constant(5, 2);
    CHECK(lipschitz_constant(X, X, id).constant == doctest::Approx(1.0));
    CHECK(lipschitz_constant(X, X, constant).constant == 0.0);

    const auto two = FiniteMetricSpace::from_matrix({0, 1, 1, 0});
    const auto far = FiniteMetricSpace::from_matrix({0, 3, 3, 0});
    CHECK(lipschitz_constant(two, far, {0, 1}).constant == doctest::Approx(3.0));
}

TEST_CASE("balls") {
    const auto X = graph_metric(path_graph(3));
    CHECK(ball(X, 1, 0.0) == std::vector<std::size_t>{1});
    CHECK(ball(X, "1", 1.0) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("ball growth bound 2 d^k") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Graph g = random_regular(40, 3, seed);
        const auto r = ball_growth_check(g, 2);
        CHECK(r.bound == 18.0);
        CHECK(r.ok);
        CHECK(r.largest_ball <= 13);  // 1 + 3 + 9
    }
    const auto c = ball_growth_check(cycle_graph(20), 3);
    CHECK(c.largest_ball == 7);
    CHECK(c.bound == 16.0);
    const auto z = ball_growth_check(cycle_graph(20), 0);
    CHECK(z.largest_ball == 1);
    CHECK(z.bound == 2.0);
}

TEST_CASE("named substreams are independent of call order") {
    const auto a = substream_seed(7, "gen", 0);
    const auto b = substream_seed(7, "gen", 1);
    const auto c = substream_seed(7, "poincare", 0);
    CHECK(a != b);
    CHECK(a != c);
    CHECK(a == substream_seed(7, "gen", 0));
    Rng r1(a), r2(a);
    for (int i = 0; i < 10; ++i) CHECK(r1.next() == r2.next());
}

TEST_CASE("property: graph metrics satisfy the metric axioms") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 10 + 2 * static_cast<int>(rng.below(10));
        const Graph g = random_regular(n, 3 + static_cast<int>(rng.below(2)) * 1, rng.next() | 1);
        const auto X = graph_metric(g);
        for (std::size_t i = 0; i < X.size(); ++i)
            for (std::size_t j = 0; j < X.size(); ++j) {
                CHECK(X(i, j) == X(j, i));
                for (std::size_t k = 0; k < X.size(); ++k) CHECK(X(i, j) <= X(i, k) + X(k, j));
            }
    }
}
