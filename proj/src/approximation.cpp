#include "coarse/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "coarse/error.hpp"
#include "coarse/rng.hpp"

namespace coarse {

namespace {

Simplex image_simplex(const std::vector<ComplexPoint>& images, const Simplex& s) {
    Simplex out;
    for (int v : s) out = simplex_union(out, images[static_cast<std::size_t>(v)].carrier());
    return out;
}

std::string describe(const ComplexPoint& p) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < p.vertices.size(); ++i)
        os << (i ? ", " : "") << p.vertices[i] << ':' << p.weights[i];
    os << '}';
    return os.str();
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

PLMap make_pl_map(MetricComplex domain, MetricComplex codomain, std::vector<ComplexPoint> images) {
    if (static_cast<int>(images.size()) != domain.vertex_count())
        throw Error(ErrorKind::InvalidInput, "PL map needs one image per domain vertex");
    for (const auto& p : images)
        if (!codomain.contains(p.carrier()))
            throw Error(ErrorKind::InvalidInput, "vertex image " + describe(p) + " is not in the codomain");
    for (const auto& s : domain.maximal_simplices())
        if (!codomain.contains(image_simplex(images, s)))
            throw Error(ErrorKind::InvalidInput, "images of a domain simplex do not share a codomain simplex");
    return {std::move(domain), std::move(codomain), std::move(images)};
}

ComplexPoint pl_evaluate(const PLMap& f, const ComplexPoint& x) {
    std::vector<std::pair<double, const ComplexPoint*>> terms;
    for (std::size_t i = 0; i < x.vertices.size(); ++i)
        terms.emplace_back(x.weights[i], &f.images.at(static_cast<std::size_t>(x.vertices[i])));
    return affine_combination(terms);
}

bool is_simplicial(const PLMap& f) {
    return std::all_of(f.images.begin(), f.images.end(), [](const ComplexPoint& p) { return p.vertices.size() == 1; });
}

double pl_lipschitz(const PLMap& f) {
    double best = 0.0;
    for (const auto& s : f.domain.maximal_simplices()) {
        if (s.size() < 2) continue;
        const Simplex tau = image_simplex(f.images, s);
        const Eigen::MatrixXd P = f.domain.realize(s);
        const Eigen::MatrixXd Q = f.codomain.realize(tau);
        Eigen::MatrixXd Y(static_cast<Eigen::Index>(s.size()), Q.cols());
        for (std::size_t i = 0; i < s.size(); ++i) {
            Eigen::RowVectorXd y = Eigen::RowVectorXd::Zero(Q.cols());
            const auto& img = f.images[static_cast<std::size_t>(s[i])];
            for (std::size_t j = 0; j < tau.size(); ++j)
                y += img.weight(tau[j]) * Q.row(static_cast<Eigen::Index>(j));
            Y.row(static_cast<Eigen::Index>(i)) = y;
        }
        const auto k = static_cast<Eigen::Index>(s.size()) - 1;
        const Eigen::MatrixXd E = P.bottomRows(k).rowwise() - P.row(0);
        const Eigen::MatrixXd Z = Y.bottomRows(k).rowwise() - Y.row(0);
        const Eigen::MatrixXd A = E.partialPivLu().solve(Z);  // row vectors: x E^-1 Z
        if (A.size() == 0) continue;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
        best = std::max(best, svd.singularValues()(0));
    }
    return best;
}

ApproximationResult simplicial_approximation(const PLMap& f, const ApproximationOptions& options) {
    const MetricComplex& K = f.codomain;
    ApproximationResult res{barycentric_subdivide(f.domain, 0), {}, {}};
    res.lambda = pl_lipschitz(f);
    const int n = K.dimension();
    const double r_n = n < 1 ? std::numeric_limits<double>::infinity()
                       : K.kind() == MetricKind::Uniform ? inradius(n, K.uniform_size())
                                                         : K.min_inradius();
    res.target_mesh = res.lambda > 0.0 ? r_n / (4.0 * res.lambda) : std::numeric_limits<double>::infinity();
    const bool simplicial = is_simplicial(f) && !options.depth;

    int depth = options.depth.value_or(0);
    if (options.depth && *options.depth < 0) throw Error(ErrorKind::Config, "subdivision depth must be non-negative");
    auto predicted = [&](int t) {
        return static_cast<double>(f.domain.maximal_simplices().size()) *
               std::pow(factorial(f.domain.dimension() + 1), t);
    };
    if (!simplicial && !options.depth) {
        while (!(res.subdivision.complex.mesh() < res.target_mesh)) {
            ++depth;
            if (depth > options.max_depth || predicted(depth) > static_cast<double>(options.max_simplices)) {
                std::ostringstream os;
                os << "cannot reach mesh < " << res.target_mesh << " within the subdivision cap (mesh "
                   << res.subdivision.complex.mesh() << " at depth " << depth - 1 << ")";
                throw Error(ErrorKind::Approximation, os.str());
            }
            res.subdivision = barycentric_subdivide(f.domain, depth);
        }
    } else if (depth > 0) {
        if (predicted(depth) > static_cast<double>(options.max_simplices))
            throw Error(ErrorKind::Approximation, "forced depth exceeds the simplex cap");
        res.subdivision = barycentric_subdivide(f.domain, depth);
    }
    const MetricComplex& T = res.subdivision.complex;
    res.mesh = T.mesh();
    res.r_T = T.dimension() > 0 ? T.min_inradius() : std::numeric_limits<double>::infinity();
    res.mu = 1.0 / res.r_T;

    const auto nv = static_cast<std::size_t>(T.vertex_count());
    for (std::size_t a = 0; a < nv; ++a) res.f_values.push_back(pl_evaluate(f, res.subdivision.carrier[a]));

    res.g.assign(nv, -1);
    res.star_total = nv;
    for (std::size_t a = 0; a < nv; ++a) {
        const ComplexPoint& fa = res.f_values[a];
        if (simplicial) {
            res.g[a] = fa.vertices.front();
            ++res.star_ok;
            continue;
        }
        Simplex star;
        for (std::size_t m : T.maximal_containing({static_cast<int>(a)}))
            star = simplex_union(star, T.maximal_simplices()[m]);
        double best = 0.0;
        for (std::size_t j = 0; j < fa.vertices.size(); ++j) {
            const int v = fa.vertices[j];
            const bool admissible = std::all_of(star.begin(), star.end(), [&](int w) {
                return res.f_values[static_cast<std::size_t>(w)].weight(v) > 0.0;
            });
            if (admissible && fa.weights[j] > best) {
                best = fa.weights[j];
                res.g[a] = v;
            }
        }
        if (res.g[a] < 0) {
            std::ostringstream os;
            os << "no admissible star vertex for subdivision vertex " << a << " at "
               << describe(res.subdivision.carrier[a]) << " (f = " << describe(fa) << ")";
            throw Error(ErrorKind::Approximation, os.str());
        }
        ++res.star_ok;
    }

    res.g_simplicial = true;
    res.homotopy_defined = true;
    Rng rng = substream(options.seed, "approximation-samples");
    auto g_at = [&](const ComplexPoint& x) {
        std::vector<std::pair<int, double>> pairs;
        for (std::size_t i = 0; i < x.vertices.size(); ++i)
            pairs.emplace_back(res.g[static_cast<std::size_t>(x.vertices[i])], x.weights[i]);
        return ComplexPoint::from_pairs(std::move(pairs));
    };
    auto f_at = [&](const ComplexPoint& x) {
        std::vector<std::pair<double, const ComplexPoint*>> terms;
        for (std::size_t i = 0; i < x.vertices.size(); ++i)
            terms.emplace_back(x.weights[i], &res.f_values[static_cast<std::size_t>(x.vertices[i])]);
        return affine_combination(terms);
    };
    for (const auto& s : T.maximal_simplices()) {
        Simplex gs;
        for (int a : s) gs.push_back(res.g[static_cast<std::size_t>(a)]);
        if (!K.contains(make_simplex(gs))) res.g_simplicial = false;

        std::vector<ComplexPoint> pts;
        for (int a : s) pts.push_back(ComplexPoint::vertex(a));
        for (int i = 0; i < options.samples_per_simplex; ++i) pts.push_back(random_interior_point(s, rng));
        std::vector<std::pair<ComplexPoint, ComplexPoint>> images;
        for (const auto& x : pts) {
            const ComplexPoint fx = f_at(x), gx = g_at(x);
            ++res.samples;
            if (is_face_of(gx.carrier(), fx.carrier())) ++res.carrier_ok;
            if (!K.contains(simplex_union(fx.carrier(), gx.carrier()))) res.homotopy_defined = false;
            if (x.vertices.size() == s.size())
                for (int a : s) {
                    ++res.open_star_total;
                    if (fx.weight(res.g[static_cast<std::size_t>(a)]) > 0.0) ++res.open_star_ok;
                }
            images.emplace_back(fx, gx);
        }
        if (!res.homotopy_defined) continue;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double s0 = rng.uniform(), s1 = rng.uniform();
            const auto h0 = affine_combination({{1.0 - s0, &images[i].first}, {s0, &images[i].second}});
            const auto h1 = affine_combination({{1.0 - s1, &images[i + 1].first}, {s1, &images[i + 1].second}});
            const double dx = T.distance_within(pts[i], pts[i + 1]);
            const double denom = std::sqrt(dx * dx + (s0 - s1) * (s0 - s1));
            if (denom > 0.0) res.homotopy_lipschitz = std::max(res.homotopy_lipschitz, K.distance_within(h0, h1) / denom);
        }
    }
    return res;
}

PLMap random_pl_map(int domain_dimension, std::uint64_t seed) {
    if (domain_dimension < 1 || domain_dimension > 3)
        throw Error(ErrorKind::Config, "random PL maps support domain dimension 1 to 3");
    Rng rng = substream(seed, "random-pl-map", static_cast<std::uint64_t>(domain_dimension));

    std::vector<MetricComplex> targets;
    {
        std::vector<Simplex> cycle, disk;
        for (int i = 0; i < 6; ++i) {
            cycle.push_back({i, (i + 1) % 6});
            disk.push_back({0, i + 1, (i + 1) % 6 + 1});
        }
        targets.push_back(MetricComplex::uniform(6, cycle, 1.0));
        targets.push_back(MetricComplex::uniform(7, disk, 1.0));
        targets.push_back(MetricComplex::uniform(5, {{0, 1, 2, 3}, {1, 2, 3, 4}}, 1.0));
    }
    MetricComplex K = targets[rng.below(targets.size())];

    std::vector<Simplex> cells;
    int nv = 0;
    int cap = 8;
    if (domain_dimension == 1) {
        nv = 6 + static_cast<int>(rng.below(7));
        for (int i = 0; i + 1 < nv; ++i) cells.push_back({i, i + 1});
    } else if (domain_dimension == 2) {
        nv = 4 + static_cast<int>(rng.below(3));
        for (int i = 0; i + 2 < nv; ++i) cells.push_back({i, i + 1, i + 2});
        cap = 5;
    } else {
        nv = 4 + static_cast<int>(rng.below(2));
        for (int i = 0; i + 3 < nv; ++i) cells.push_back({i, i + 1, i + 2, i + 3});
        cap = 3;
    }
    MetricComplex L = MetricComplex::uniform(nv, cells, 1.0);

    // Keep lambda small enough that the mesh target is reachable within the cap.
    const double shrink = std::pow(static_cast<double>(domain_dimension) / (domain_dimension + 1), cap);
    const double lambda_max = 0.9 * inradius(K.dimension(), 1.0) / (4.0 * shrink);

    double eps = domain_dimension == 1 ? rng.uniform(0.4, 0.9) : rng.uniform(0.3, 0.8);
    const auto& tops = K.maximal_simplices();
    for (int attempt = 0; attempt < 40; ++attempt, eps *= 0.5) {
        std::vector<ComplexPoint> images;
        if (domain_dimension == 1) {
            images.push_back(random_interior_point(tops[rng.below(tops.size())], rng));
            for (int i = 1; i < nv; ++i) {
                const auto around = K.maximal_containing(images.back().carrier());
                const ComplexPoint r = random_interior_point(tops[around[rng.below(around.size())]], rng);
                images.push_back(affine_combination({{1.0 - eps, &images.back()}, {eps, &r}}));
            }
        } else {
            const Simplex& tau = tops[rng.below(tops.size())];
            const ComplexPoint c = random_interior_point(tau, rng);
            for (int i = 0; i < nv; ++i) {
                const ComplexPoint r = random_interior_point(tau, rng);
                images.push_back(affine_combination({{1.0 - eps, &c}, {eps, &r}}));
            }
        }
        PLMap f = make_pl_map(L, K, std::move(images));
        if (pl_lipschitz(f) <= lambda_max) return f;
    }
    throw Error(ErrorKind::Approximation, "could not generate a PL map with small Lipschitz constant");
}

}  // namespace coarse
