#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "coarse/approximation.hpp"
#include "coarse/error.hpp"

using namespace coarse;

namespace {

// f at a point of the domain, accumulated directly from the vertex images.
std::map<int, double> evaluate(const PLMap& f, const ComplexPoint& x) {
    std::map<int, double> out;
    for (std::size_t i = 0; i < x.vertices.size(); ++i) {
        const auto& img = f.images[static_cast<std::size_t>(x.vertices[i])];
        for (std::size_t j = 0; j < img.vertices.size(); ++j) out[img.vertices[j]] += x.weights[i] * img.weights[j];
    }
    return out;
}

// Exhaustive star condition: for every vertex a of T and every vertex w in a
// simplex of T containing a, f(w) has positive weight at g(a). Also checks
// that g maps simplices of T onto simplices of the codomain.
struct StarOracle {
    std::size_t failures = 0;
    std::size_t non_simplicial = 0;
};

StarOracle star_oracle(const PLMap& f, const ApproximationResult& r) {
    StarOracle o;
    const auto& T = r.subdivision.complex;
    std::vector<std::map<int, double>> fv;
    for (int w = 0; w < T.vertex_count(); ++w) fv.push_back(evaluate(f, r.subdivision.carrier[static_cast<std::size_t>(w)]));
    for (const auto& s : T.maximal_simplices()) {
        for (int a : s) {
            const int ga = r.g[static_cast<std::size_t>(a)];
            for (int w : s) {
                const auto it = fv[static_cast<std::size_t>(w)].find(ga);
                if (it == fv[static_cast<std::size_t>(w)].end() || !(it->second > 1e-15)) ++o.failures;
            }
        }
        std::vector<int> img;
        for (int a : s) img.push_back(r.g[static_cast<std::size_t>(a)]);
        if (!f.codomain.contains(make_simplex(img))) ++o.non_simplicial;
    }
    return o;
}

MetricComplex triangle() { return MetricComplex::uniform(3, {{0, 1, 2}}, 1.0); }

}  // namespace

TEST_CASE("PL map validation") {
    const auto L = MetricComplex::uniform(2, {{0, 1}}, 1.0);
    const auto K = MetricComplex::uniform(3, {{0, 1}, {1, 2}}, 1.0);
    CHECK_THROWS_AS(make_pl_map(L, K, {ComplexPoint::vertex(0), ComplexPoint::vertex(2)}), Error);
    CHECK_THROWS_AS(make_pl_map(L, K, {ComplexPoint::vertex(0)}), Error);
    CHECK_THROWS_AS(make_pl_map(L, K, {ComplexPoint::vertex(0), ComplexPoint::vertex(7)}), Error);
}

TEST_CASE("PL Lipschitz constant of a stretch") {
    const auto L = MetricComplex::uniform(2, {{0, 1}}, 1.0);
    const auto K = MetricComplex::uniform(2, {{0, 1}}, 1.0);
    const auto f = make_pl_map(L, K, {ComplexPoint::from_pairs({{0, 0.75}, {1, 0.25}}),
                                      ComplexPoint::from_pairs({{0, 0.25}, {1, 0.75}})});
    CHECK(pl_lipschitz(f) == doctest::Approx(0.5));
    const auto mid = pl_evaluate(f, ComplexPoint::barycenter({0, 1}));
    CHECK(mid.weight(0) == doctest::Approx(0.5));
}

TEST_CASE("simplicial input is returned unchanged") {
    const auto f = make_pl_map(triangle(), triangle(),
                               {ComplexPoint::vertex(1), ComplexPoint::vertex(2), ComplexPoint::vertex(0)});
    CHECK(is_simplicial(f));
    const auto r = simplicial_approximation(f);
    CHECK(r.subdivision.times == 0);
    CHECK(r.g == std::vector<int>{1, 2, 0});
    CHECK(r.g_simplicial);
    for (std::size_t a = 0; a < r.g.size(); ++a) CHECK(r.f_values[a] == ComplexPoint::vertex(r.g[a]));
    CHECK(r.star_ok == r.star_total);
}

TEST_CASE("perturbed simplicial map recovers the original assignment") {
    const std::vector<int> original{2, 0, 1};
    const double eps = 0.01;
    std::vector<ComplexPoint> images;
    for (int v : original) images.push_back(ComplexPoint::from_pairs({{v, 1.0 - eps}, {0, eps / 3}, {1, eps / 3}, {2, eps / 3}}));
    const auto f = make_pl_map(triangle(), triangle(), images);
    const auto r = simplicial_approximation(f);
    CHECK(r.mesh < r.target_mesh);
    for (int a = 0; a < r.subdivision.complex.vertex_count(); ++a) {
        const auto& c = r.subdivision.carrier[static_cast<std::size_t>(a)];
        if (c.vertices.size() == 1) CHECK(r.g[static_cast<std::size_t>(a)] == original[static_cast<std::size_t>(c.vertices[0])]);
    }
    const auto o = star_oracle(f, r);
    CHECK(o.failures == 0);
    CHECK(o.non_simplicial == 0);
}

TEST_CASE("edge collapsed near one vertex maps to that vertex") {
    const auto L = MetricComplex::uniform(2, {{0, 1}}, 1.0);
    const auto K = triangle();
    const auto f = make_pl_map(L, K, {ComplexPoint::from_pairs({{1, 0.99}, {0, 0.01}}),
                                      ComplexPoint::from_pairs({{1, 0.99}, {2, 0.01}})});
    const auto r = simplicial_approximation(f);
    for (int gv : r.g) CHECK(gv == 1);
}

TEST_CASE("coarse meshes fail with an approximation error") {
    const auto L = MetricComplex::uniform(2, {{0, 1}}, 1.0);
    // Image carriers {0, 1} and {2} are disjoint, so no vertex is admissible on the whole edge.
    const auto f = make_pl_map(L, triangle(), {ComplexPoint::from_pairs({{0, 0.95}, {1, 0.05}}), ComplexPoint::vertex(2)});
    ApproximationOptions capped;
    capped.max_depth = 0;
    try {
        simplicial_approximation(f, capped);
        FAIL("expected an approximation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Approximation);
    }
    ApproximationOptions forced;
    forced.depth = 0;
    try {
        simplicial_approximation(f, forced);
        FAIL("expected an approximation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Approximation);
        CHECK(std::string(e.what()).find("vertex") != std::string::npos);
    }
    const auto r = simplicial_approximation(f);
    CHECK(r.subdivision.times > 0);
    CHECK(star_oracle(f, r).failures == 0);
}

TEST_CASE("property: random PL maps satisfy the star condition after subdivision") {
    for (std::uint64_t seed = 0; seed < 9; ++seed) {
        const int dim = 1 + static_cast<int>(seed % 3);
        const auto f = random_pl_map(dim, seed);
        CHECK(f.domain.dimension() == dim);
        CHECK(f.codomain.dimension() <= 3);
        const auto r = simplicial_approximation(f);
        if (!is_simplicial(f)) CHECK(r.mesh < r.target_mesh);
        CHECK(r.target_mesh == doctest::Approx(inradius(f.codomain.dimension(), 1.0) / (4 * r.lambda)));
        CHECK(r.star_ok == r.star_total);
        CHECK(r.carrier_ok == r.samples);
        CHECK(r.open_star_ok == r.open_star_total);
        CHECK(r.homotopy_defined);
        CHECK(r.g_simplicial);
        const auto o = star_oracle(f, r);
        CHECK(o.failures == 0);
        CHECK(o.non_simplicial == 0);
        // g(a) lies in the carrier of f(a) at every vertex of T.
        for (int a = 0; a < r.subdivision.complex.vertex_count(); ++a) {
            const auto fa = evaluate(f, r.subdivision.carrier[static_cast<std::size_t>(a)]);
            CHECK(fa.count(r.g[static_cast<std::size_t>(a)]) == 1);
        }
    }
}
