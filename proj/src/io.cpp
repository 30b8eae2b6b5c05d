#include "coarse/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "coarse/error.hpp"

namespace coarse {

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string(what) + ": " + e.what());
    }
}

Json simplex_list(const std::vector<Simplex>& simplices) {
    Json out = Json::array();
    for (const auto& s : simplices) out.push_back(s);
    return out;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, origin + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Config, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Config, "cannot write " + path);
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

void write_json_file(const std::string& path, const Json& doc) { write_text_file(path, doc.dump(2)); }

Json graph_to_json(const Graph& g) {
    Json edges = Json::array();
    for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
    return {{"n", g.size()}, {"edges", edges}, {"degree", g.degree_bound()}};
}

Graph graph_from_json(const Json& doc) {
    return guarded("graph", [&] {
        std::vector<Edge> edges;
        for (const auto& e : doc.at("edges")) {
            if (e.size() != 2) throw Error(ErrorKind::Parse, "graph: edges must be pairs");
            edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        }
        return Graph(doc.at("n").get<int>(), std::move(edges), doc.at("degree").get<int>());
    });
}

Json metric_to_json(const FiniteMetricSpace& X) {
    Json dist = Json::array();
    for (std::size_t i = 0; i < X.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < X.size(); ++j) row.push_back(X(i, j));
        dist.push_back(std::move(row));
    }
    return {{"points", X.point_ids()}, {"dist", dist}, {"base", X.point_ids()[X.base()]}};
}

FiniteMetricSpace metric_from_json(const Json& doc) {
    return guarded("metric", [&] {
        std::vector<std::string> ids;
        for (const auto& p : doc.at("points")) ids.push_back(p.is_string() ? p.get<std::string>() : p.dump());
        const auto& rows = doc.at("dist");
        if (rows.size() != ids.size()) throw Error(ErrorKind::Parse, "metric: dist needs one row per point");
        std::vector<double> dist;
        for (const auto& row : rows) {
            if (row.size() != ids.size()) throw Error(ErrorKind::Parse, "metric: dist must be square");
            for (const auto& v : row) dist.push_back(v.get<double>());
        }
        std::size_t base = 0;
        if (doc.contains("base")) {
            const auto& b = doc.at("base");
            const std::string id = b.is_string() ? b.get<std::string>() : b.dump();
            const auto it = std::find(ids.begin(), ids.end(), id);
            if (it == ids.end()) throw Error(ErrorKind::InvalidInput, "metric: unknown base point " + id);
            base = static_cast<std::size_t>(it - ids.begin());
        }
        return FiniteMetricSpace(std::move(ids), std::move(dist), base);
    });
}

Json cover_to_json(const FiniteMetricSpace& X, const Cover& cover) {
    Json sets = Json::array();
    for (const auto& s : cover.sets) {
        Json ids = Json::array();
        for (std::size_t x : s) ids.push_back(X.point_ids()[x]);
        sets.push_back(std::move(ids));
    }
    return {{"lambda", cover.lambda}, {"sets", sets}};
}

Cover cover_from_json(const FiniteMetricSpace& X, const Json& doc) {
    return guarded("cover", [&] {
        std::vector<std::vector<std::size_t>> sets;
        for (const auto& s : doc.at("sets")) {
            std::vector<std::size_t> members;
            for (const auto& p : s) members.push_back(X.index_of(p.is_string() ? p.get<std::string>() : p.dump()));
            sets.push_back(std::move(members));
        }
        return make_cover(X, std::move(sets), doc.at("lambda").get<double>());
    });
}

Json nerve_to_json(const FiniteMetricSpace& X, const Nerve& nerve) {
    Json faces = Json::array();
    for (const auto& [s, pts] : nerve.carrier) {
        Json ids = Json::array();
        for (std::size_t x : pts) ids.push_back(X.point_ids()[x]);
        faces.push_back({{"simplex", s}, {"points", ids}});
    }
    return {{"vertices", nerve.vertex_count},
            {"dimension", nerve.dimension},
            {"generators", simplex_list(nerve.generators)},
            {"faces", faces}};
}

std::string nerve_to_off(const Nerve& nerve) {
    std::set<Simplex> polys;
    for (const auto& g : nerve.generators) {
        if (g.size() <= 3) {
            if (g.size() >= 2) polys.insert(g);
            continue;
        }
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = a + 1; b < g.size(); ++b)
                for (std::size_t c = b + 1; c < g.size(); ++c) polys.insert({g[a], g[b], g[c]});
    }
    // Drop edges already drawn as sides of a triangle.
    for (auto it = polys.begin(); it != polys.end();) {
        bool covered = false;
        if (it->size() == 2)
            for (const auto& p : polys)
                if (p.size() == 3 && is_face_of(*it, p)) covered = true;
        it = covered ? polys.erase(it) : std::next(it);
    }
    std::ostringstream os;
    os << "OFF\n" << nerve.vertex_count << ' ' << polys.size() << " 0\n";
    const double n = std::max(1, nerve.vertex_count - 1);
    for (int v = 0; v < nerve.vertex_count; ++v) {
        const double t = v / n;
        os << format_real(t) << ' ' << format_real(t * t) << ' ' << format_real(t * t * t) << '\n';
    }
    for (const auto& p : polys) {
        os << p.size();
        for (int v : p) os << ' ' << v;
        os << '\n';
    }
    return os.str();
}

Json complex_to_json(const MetricComplex& K) {
    Json doc;
    switch (K.kind()) {
        case MetricKind::Uniform:
            doc["metric"] = "uniform";
            doc["lambda"] = K.uniform_size();
            break;
        case MetricKind::C0: {
            doc["metric"] = "c0";
            Json levels = Json::object();
            for (int v = 0; v < K.vertex_count(); ++v) levels[std::to_string(v)] = K.level(v);
            doc["levels"] = levels;
            break;
        }
        case MetricKind::Euclidean: {
            doc["metric"] = "euclidean";
            Json lengths = Json::array();
            for (const auto& s : K.simplices())
                if (s.size() == 2) lengths.push_back({s[0], s[1], K.edge_length(s[0], s[1])});
            doc["edge_lengths"] = lengths;
            break;
        }
    }
    doc["vertices"] = K.vertex_count();
    doc["simplices"] = simplex_list(K.maximal_simplices());
    return doc;
}

MetricComplex complex_from_json(const Json& doc) {
    return guarded("complex", [&] {
        std::vector<Simplex> simplices;
        int top = -1;
        for (const auto& s : doc.at("simplices")) {
            simplices.push_back(s.get<Simplex>());
            for (int v : simplices.back()) top = std::max(top, v);
        }
        const int n = doc.contains("vertices") ? doc.at("vertices").get<int>() : top + 1;
        const auto metric = doc.at("metric").get<std::string>();
        if (metric == "uniform") return MetricComplex::uniform(n, std::move(simplices), doc.at("lambda").get<double>());
        if (metric == "c0") {
            std::vector<int> levels(static_cast<std::size_t>(n), -1);
            for (const auto& [key, value] : doc.at("levels").items()) {
                std::size_t used = 0;
                int v = -1;
                try {
                    v = std::stoi(key, &used);
                } catch (const std::exception&) {
                }
                if (used != key.size() || v < 0 || v >= n)
                    throw Error(ErrorKind::Parse, "complex: bad vertex key '" + key + "' in levels");
                levels[static_cast<std::size_t>(v)] = value.get<int>();
            }
            for (int v = 0; v < n; ++v)
                if (levels[static_cast<std::size_t>(v)] < 0)
                    throw Error(ErrorKind::InvalidInput, "complex: vertex " + std::to_string(v) + " has no level");
            return MetricComplex::c0(n, std::move(simplices), std::move(levels));
        }
        if (metric == "euclidean") {
            std::map<Edge, double> lengths;
            for (const auto& e : doc.at("edge_lengths")) {
                const int u = e.at(0).get<int>(), v = e.at(1).get<int>();
                lengths[{std::min(u, v), std::max(u, v)}] = e.at(2).get<double>();
            }
            return MetricComplex::euclidean(n, std::move(simplices), lengths);
        }
        throw Error(ErrorKind::Parse, "complex: unknown metric '" + metric + "'");
    });
}

Json point_to_json(const ComplexPoint& p) {
    Json out = Json::array();
    for (std::size_t i = 0; i < p.vertices.size(); ++i) out.push_back({p.vertices[i], p.weights[i]});
    return out;
}

ComplexPoint point_from_json(const Json& doc) {
    return guarded("point", [&] {
        std::vector<std::pair<int, double>> pairs;
        for (const auto& e : doc) pairs.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
        return ComplexPoint::from_pairs(std::move(pairs));
    });
}

Json plmap_to_json(const PLMap& f) {
    Json images = Json::array();
    for (const auto& p : f.images) images.push_back(point_to_json(p));
    return {{"domain", complex_to_json(f.domain)}, {"codomain", complex_to_json(f.codomain)}, {"images", images}};
}

PLMap plmap_from_json(const Json& doc) {
    return guarded("pl map", [&] {
        std::vector<ComplexPoint> images;
        for (const auto& p : doc.at("images")) images.push_back(point_from_json(p));
        return make_pl_map(complex_from_json(doc.at("domain")), complex_from_json(doc.at("codomain")),
                           std::move(images));
    });
}

Json cheeger_to_json(const CheegerResult& h) {
    Json out = {{"method", h.method()}, {"lower", h.lower}, {"upper", h.upper}};
    if (h.exact) {
        out["value"] = h.lower;
        out["witness"] = h.witness;
    }
    return out;
}

Json spectral_report_json(const Graph& g, const Spectrum& sp, const CheegerResult& h) {
    const double l1 = sp.lambda1();
    Json values = Json::array();
    for (Eigen::Index i = 0; i < sp.values.size(); ++i) values.push_back(sp.values(i));
    return {{"n", g.size()},
            {"degree", g.degree_bound()},
            {"edges", g.edges().size()},
            {"lambda1", l1},
            {"c0", poincare_constant(g, l1)},
            {"cheeger", cheeger_to_json(h)},
            {"spectrum", values}};
}

Json cloud_to_json(const EmbeddedCloud& cloud) {
    Json vectors = Json::object();
    for (std::size_t i = 0; i < cloud.ids.size(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < cloud.coords.cols(); ++j) row.push_back(cloud.coords(static_cast<Eigen::Index>(i), j));
        vectors[cloud.ids[i]] = std::move(row);
    }
    return {{"dim", cloud.coords.cols()}, {"vectors", vectors}, {"provenance", cloud.provenance}};
}

EmbeddedCloud cloud_from_json(const Json& doc) {
    return guarded("cloud", [&] {
        EmbeddedCloud cloud;
        const auto dim = doc.at("dim").get<Eigen::Index>();
        const auto& vectors = doc.at("vectors");
        cloud.coords.resize(static_cast<Eigen::Index>(vectors.size()), dim);
        Eigen::Index i = 0;
        for (const auto& [id, row] : vectors.items()) {
            if (static_cast<Eigen::Index>(row.size()) != dim)
                throw Error(ErrorKind::Parse, "cloud: vector '" + id + "' does not have dim entries");
            cloud.ids.push_back(id);
            for (Eigen::Index j = 0; j < dim; ++j) cloud.coords(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
            ++i;
        }
        cloud.provenance = doc.value("provenance", std::string("user"));
        return cloud;
    });
}

std::string format_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string profile_csv(const CompressionProfile& profile) {
    std::ostringstream os;
    os << "bucket,count,min,mean,max,rho1,rho2\n";
    for (const auto& b : profile.buckets)
        os << b.bucket << ',' << b.count << ',' << format_real(b.min) << ',' << format_real(b.mean) << ','
           << format_real(b.max) << ',' << format_real(b.rho1) << ',' << format_real(b.rho2) << '\n';
    return os.str();
}

std::string verdict_csv(const std::vector<AuditRow>& rows) {
    std::ostringstream os;
    os << "n,lambda1,c0,threshold,min_far_sq,bound_4c0,rho1,rho1_bound,pass\n";
    for (const auto& r : rows)
        os << r.n << ',' << format_real(r.lambda1) << ',' << format_real(r.c0) << ',' << format_real(r.threshold)
           << ',' << format_real(r.min_far_sq) << ',' << format_real(r.bound_4c0) << ','
           << format_real(r.rho1_at_threshold) << ',' << format_real(r.rho1_bound) << ','
           << (r.pass() ? "true" : "false") << '\n';
    return os.str();
}

std::string projection_csv(const FiniteMetricSpace& X, const NerveProjection& p) {
    std::ostringstream os;
    os << "point";
    for (int u = 0; u < p.nerve.vertex_count; ++u) os << ",U" << u;
    os << '\n';
    for (std::size_t x = 0; x < X.size(); ++x) {
        os << X.point_ids()[x];
        for (int u = 0; u < p.nerve.vertex_count; ++u) os << ',' << format_real(p.image[x].weight(u));
        os << '\n';
    }
    return os.str();
}

std::string family_csv(const ExpanderFamily& family) {
    std::ostringstream os;
    os << "n,lambda1,h_lower,h_upper,method,c0\n";
    for (std::size_t m = 0; m < family.graphs.size(); ++m) {
        const auto& g = family.graphs[m];
        const auto& h = family.cheeger[m];
        os << g.size() << ',' << format_real(family.lambda1[m]) << ',' << format_real(h.lower) << ','
           << format_real(h.upper) << ',' << h.method() << ',' << format_real(poincare_constant(g, family.lambda1[m]))
           << '\n';
    }
    return os.str();
}

}  // namespace coarse
