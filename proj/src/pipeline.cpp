#include "coarse/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "coarse/approximation.hpp"
#include "coarse/covers.hpp"
#include "coarse/embedding.hpp"
#include "coarse/error.hpp"

namespace coarse {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty()) out.push_back(t);
    return out;
}

template <class T>
T parse_integer(const std::string& key, const std::string& text) {
    T value{};
    const auto t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw Error(ErrorKind::Config, key + ": expected an integer, got '" + text + "'");
    return value;
}

double parse_real(const std::string& key, const std::string& text) {
    const auto t = trim(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size()) throw Error(ErrorKind::Config, key + ": expected a number, got '" + text + "'");
    return value;
}

std::string path_in(const ExperimentConfig& config, const std::string& rel) {
    return (std::filesystem::path(config.out) / rel).string();
}

std::string member_tag(std::size_t m, int n) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "member_%02zu_n%d", m, n);
    return buf;
}

void emit_json(const ExperimentConfig& config, StageResult& stage, const std::string& rel, const Json& doc) {
    write_json_file(path_in(config, rel), doc);
    stage.artifacts.push_back(rel);
}

void emit_text(const ExperimentConfig& config, StageResult& stage, const std::string& rel, const std::string& text) {
    write_text_file(path_in(config, rel), text);
    stage.artifacts.push_back(rel);
}

std::uint64_t seed_of(const ExperimentConfig& config) {
    if (!config.seed) throw Error(ErrorKind::Config, "seed is required");
    return *config.seed;
}

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
    auto ints = [&] {
        std::vector<int> out;
        for (const auto& s : split_list(value)) out.push_back(parse_integer<int>(key, s));
        return out;
    };
    if (key == "seed") c.seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "sizes") c.sizes = ints();
    else if (key == "degree") c.degree = parse_integer<int>(key, value);
    else if (key == "lambdas") {
        c.lambdas.clear();
        for (const auto& s : split_list(value)) c.lambdas.push_back(parse_real(key, s));
    }
    else if (key == "trials") c.trials = parse_integer<int>(key, value);
    else if (key == "lipschitz_maps") c.lipschitz_maps = parse_integer<int>(key, value);
    else if (key == "max_exact_n") c.max_exact_n = parse_integer<int>(key, value);
    else if (key == "out") c.out = trim(value);
    else if (key == "cover_max_n") c.cover_max_n = parse_integer<int>(key, value);
    else if (key == "embed_complexes") c.embed_complexes = parse_integer<int>(key, value);
    else if (key == "embed_pairs") c.embed_pairs = parse_integer<int>(key, value);
    else if (key == "approx_maps") c.approx_maps = parse_integer<int>(key, value);
    else if (key == "spectral_dim") c.spectral_dim = parse_integer<int>(key, value);
    else if (key == "audit_sources") c.audit_sources = split_list(value);
    else if (key == "graphs") c.graph_files = split_list(value);
    else if (key == "clouds") c.cloud_files = split_list(value);
    else if (key == "maps") c.map_files = split_list(value);
    else if (key == "approx_depth") c.approx_depth = parse_integer<int>(key, value);
    else if (key == "approx_max_depth") c.approx_max_depth = parse_integer<int>(key, value);
    else throw Error(ErrorKind::Config, "unknown configuration key '" + key + "'");
}

void apply_config_text(ExperimentConfig& config, const std::string& text, const std::string& origin) {
    std::stringstream ss(text);
    std::string line;
    int number = 0;
    while (std::getline(ss, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::Parse, origin + ":" + std::to_string(number) + ": expected key = value");
        apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void validate_config(const ExperimentConfig& c) {
    if (!c.seed) throw Error(ErrorKind::Config, "seed is required (no wall-clock default)");
    if (c.trials < 1) throw Error(ErrorKind::Config, "trials must be at least 1");
    if (c.lipschitz_maps < 1) throw Error(ErrorKind::Config, "lipschitz_maps must be at least 1");
    if (c.max_exact_n < 2) throw Error(ErrorKind::Config, "max_exact_n must be at least 2");
    if (c.embed_complexes < 0 || c.embed_pairs < 1) throw Error(ErrorKind::Config, "bad embedding sample sizes");
    if (c.approx_maps < 0 || c.approx_max_depth < 0) throw Error(ErrorKind::Config, "bad approximation settings");
    if (c.spectral_dim < 1) throw Error(ErrorKind::Config, "spectral_dim must be at least 1");
    for (double l : c.lambdas)
        if (!(l > 0.0)) throw Error(ErrorKind::Config, "cover scales must be positive");
    for (const auto& s : c.audit_sources)
        if (s != "spectral" && s != "lemma63" && s != "constant")
            throw Error(ErrorKind::Config, "unknown audit source '" + s + "'");
    if (!c.graph_files.empty()) return;
    if (c.sizes.empty()) throw Error(ErrorKind::Config, "sizes must not be empty");
    if (c.degree < 3) throw Error(ErrorKind::Config, "degree must be at least 3");
    for (int n : c.sizes) {
        if (n <= c.degree) throw Error(ErrorKind::Config, "member size " + std::to_string(n) + " must exceed the degree");
        if ((static_cast<long long>(n) * c.degree) % 2 != 0)
            throw Error(ErrorKind::Config, "n * d must be even (n = " + std::to_string(n) +
                                               ", d = " + std::to_string(c.degree) + ")");
    }
}

Json config_to_json(const ExperimentConfig& c) {
    // The output directory is left out so that runs into different directories compare equal.
    Json doc = {{"seed", *c.seed},
                {"sizes", c.sizes},
                {"degree", c.degree},
                {"lambdas", c.lambdas},
                {"trials", c.trials},
                {"lipschitz_maps", c.lipschitz_maps},
                {"max_exact_n", c.max_exact_n},
                {"cover_max_n", c.cover_max_n},
                {"embed_complexes", c.embed_complexes},
                {"embed_pairs", c.embed_pairs},
                {"approx_maps", c.approx_maps},
                {"spectral_dim", c.spectral_dim},
                {"audit_sources", c.audit_sources},
                {"graphs", c.graph_files},
                {"clouds", c.cloud_files},
                {"maps", c.map_files},
                {"approx_max_depth", c.approx_max_depth}};
    if (c.approx_depth) doc["approx_depth"] = *c.approx_depth;
    return doc;
}

Check check_le(std::string name, double lhs, double rhs, double tolerance, bool relative) {
    Check c{std::move(name), lhs, rhs, tolerance, relative, false};
    c.pass = relative ? lhs <= rhs * (1.0 + tolerance) : lhs <= rhs + tolerance;
    return c;
}

bool StageResult::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Json stage_to_json(const StageResult& stage) {
    Json checks = Json::array();
    for (const auto& c : stage.checks)
        checks.push_back({{"name", c.name},
                          {"lhs", format_real(c.lhs)},
                          {"relation", "<="},
                          {"rhs", format_real(c.rhs)},
                          {"tolerance", format_real(c.tolerance)},
                          {"tolerance_kind", c.relative ? "relative" : "absolute"},
                          {"pass", c.pass}});
    return {{"stage", stage.name},
            {"pass", stage.pass()},
            {"artifacts", stage.artifacts},
            {"summary", stage.summary},
            {"checks", checks}};
}

int stage_exit_code(const StageResult& stage) { return stage.pass() ? 0 : exit_code(ErrorKind::Assertion); }

ExpanderFamily load_family(const ExperimentConfig& config) {
    if (config.graph_files.empty()) return make_family(config.sizes, config.degree, seed_of(config), config.max_exact_n);
    std::vector<Graph> graphs;
    for (const auto& f : config.graph_files) graphs.push_back(graph_from_json(read_json_file(f)));
    return family_from_graphs(std::move(graphs), config.max_exact_n);
}

StageResult run_gen(const ExperimentConfig& config) {
    StageResult stage;
    stage.name = "gen";
    const auto fam = load_family(config);
    for (std::size_t m = 0; m < fam.graphs.size(); ++m) {
        const Graph& g = fam.graphs[m];
        emit_json(config, stage, "graphs/" + member_tag(m, g.size()) + ".json", graph_to_json(g));
        const double expected = 0.5 * g.size() * g.degree_bound();
        if (g.is_regular())
            stage.checks.push_back(check_le(member_tag(m, g.size()) + " |E| - nd/2", std::abs(g.edges().size() - expected), 0.0, 0.0, false));
    }
    stage.summary["members"] = fam.graphs.size();
    stage.summary["degree"] = fam.degree;
    return stage;
}

StageResult run_spectra(const ExperimentConfig& config) {
    StageResult stage;
    stage.name = "spectra";
    const auto fam = load_family(config);
    for (std::size_t m = 0; m < fam.graphs.size(); ++m) {
        const Graph& g = fam.graphs[m];
        const Spectrum sp = laplacian_spectrum(g);
        const auto& h = fam.cheeger[m];
        const std::string tag = member_tag(m, g.size());
        emit_json(config, stage, "spectra/" + tag + ".json", spectral_report_json(g, sp, h));
        if (h.exact) {
            const double d = g.degree_bound();
            stage.checks.push_back(check_le(tag + " h^2/(2d) <= lambda1", h.lower * h.lower / (2.0 * d), sp.lambda1(), 1e-9));
            stage.checks.push_back(check_le(tag + " lambda1 <= 2 d h", sp.lambda1(), 2.0 * d * h.lower, 1e-9));
        }
    }
    emit_text(config, stage, "spectra/family.csv", family_csv(fam));
    stage.summary["conductance"] = format_real(fam.conductance);
    stage.summary["c0"] = format_real(fam.c0);
    stage.summary["drift"] = fam.drift;
    return stage;
}

StageResult run_poincare(const ExperimentConfig& config) {
    StageResult stage;
    stage.name = "poincare";
    const auto fam = load_family(config);
    const auto seed = seed_of(config);
    for (std::size_t m = 0; m < fam.graphs.size(); ++m) {
        const Graph& g = fam.graphs[m];
        const std::string tag = member_tag(m, g.size());
        const auto rep = poincare_bound_check(g, config.trials, substream_seed(seed, "poincare", m));
        stage.checks.push_back(check_le(tag + " max D^2 <= c0", rep.max_ratio, rep.c0, 1e-9));
        stage.checks.push_back(check_le(tag + " |D^2(eigenvector) - c0|", std::abs(rep.eigen_ratio - rep.c0), 0.0, 1e-9 * rep.c0, false));

        Rng rng = substream(seed, "lipschitz-maps", m);
        static constexpr int dims[] = {1, 2, 8};
        double worst = 0.0;
        for (int t = 0; t < config.lipschitz_maps; ++t) {
            const auto f = normalize_lipschitz(g, random_vector_map(g.size(), dims[t % 3], rng));
            worst = std::max(worst, lipschitz_bound_corollary(g, f, rep.c0).value);
        }
        stage.checks.push_back(check_le(tag + " max mean |fx - fy|^2 over 1-Lipschitz f <= c0", worst, rep.c0, 1e-9));
        emit_json(config, stage, "poincare/" + tag + ".json",
                  {{"n", g.size()},
                   {"lambda1", rep.lambda1},
                   {"c0", rep.c0},
                   {"trials", rep.trials},
                   {"max_ratio", rep.max_ratio},
                   {"eigen_ratio", rep.eigen_ratio},
                   {"violations", rep.violations},
                   {"lipschitz_maps", config.lipschitz_maps},
                   {"max_lipschitz_mean", worst}});
    }
    return stage;
}

namespace {

struct CoverCase {
    std::size_t member;
    std::size_t scale_index;
    FiniteMetricSpace space;
    Cover cover;
    CoverStats stats;
    std::string tag;
};

std::vector<CoverCase> cover_cases(const ExperimentConfig& config) {
    const auto fam = load_family(config);
    std::vector<CoverCase> out;
    for (std::size_t m = 0; m < fam.graphs.size(); ++m) {
        const Graph& g = fam.graphs[m];
        if (g.size() > config.cover_max_n) continue;
        const auto X = graph_metric(g);
        for (std::size_t k = 0; k < config.lambdas.size(); ++k) {
            Cover cover = greedy_cover(X, config.lambdas[k]);
            const auto stats = cover_stats(X, cover);
            out.push_back({m, k, X, std::move(cover), stats, member_tag(m, g.size()) + "_lambda" + std::to_string(k)});
        }
    }
    return out;
}

Json stats_to_json(const CoverStats& s) {
    return {{"mesh", s.mesh}, {"multiplicity", s.multiplicity}, {"lebesgue", s.lebesgue}};
}

}  // namespace

StageResult run_cover(const ExperimentConfig& config) {
    StageResult stage;
    stage.name = "cover";
    for (const auto& c : cover_cases(config)) {
        Json doc = cover_to_json(c.space, c.cover);
        doc["stats"] = stats_to_json(c.stats);
        emit_json(config, stage, "covers/" + c.tag + ".json", doc);
        stage.checks.push_back(check_le(c.tag + " mesh <= 3 lambda", c.stats.mesh, 3.0 * c.cover.lambda, 0.0, false));
    }
    return stage;
}

StageResult run_nerve(const ExperimentConfig& config) {
    StageResult stage;
    stage.name = "nerve";
    Json skipped = Json::array(), unasserted = Json::array();
    for (const auto& c : cover_cases(config)) {
        if (!(c.stats.lebesgue > 0.0)) {
            skipped.push_back(c.tag);
            continue;
        }
        const NerveProjection p = nerve_projection(c.space, c.cover, c.stats.lebesgue / 2.0);
        const auto lip = projection_lipschitz(c.space, p);
        const auto cob = cobounded_check(c.space, p, c.stats.mesh);
        Json doc = nerve_to_json(c.space, p.nerve);
        doc["scale"] = p.scale;
        doc["constant"] = p.constant;
        doc["edge"] = p.complex.uniform_size();
        doc["lipschitz_nerve"] = lip.nerve.constant;
        doc["lipschitz_sphere"] = lip.sphere.constant;
        emit_json(config, stage, "nerves/" + c.tag + ".json", doc);
        emit_text(config, stage, "nerves/" + c.tag + ".off", nerve_to_off(p.nerve));
        emit_text(config, stage, "nerves/" + c.tag + "_projection.csv", projection_csv(c.space, p));
        // Adjacent points share a cover set only when the Lebesgue number exceeds the edge length.
        if (c.stats.lebesgue > 1.0)
            stage.checks.push_back(check_le(c.tag + " L(phi) <= 1", lip.nerve.constant, 1.0, 1e-9, false));
        else
            unasserted.push_back({{"cover", c.tag}, {"lipschitz", format_real(lip.nerve.constant)}});
        stage.checks.push_back(check_le(c.tag + " diam phi^-1(simplex) <= mesh", cob.worst_diameter, c.stats.mesh, 0.0, false));
    }
    stage.summary["skipped_zero_lebesgue"] = skipped;
    stage.summary["lebesgue_at_edge_length"] = unasserted;
    return stage;
}

StageResult run_embed(const ExperimentConfig& config) {
    StageResult stage;
    stage.name = "embed";
    const auto seed = seed_of(config);
    for (int k = 0; k < config.embed_complexes; ++k) {
        const auto K = random_c0_complex(substream_seed(seed, "embed-complex", static_cast<std::uint64_t>(k)));
        const auto cert = certify_embedding(K, static_cast<std::size_t>(config.embed_pairs),
                                            substream_seed(seed, "embed-pairs", static_cast<std::uint64_t>(k)));
        char tag[32];
        std::snprintf(tag, sizeof tag, "complex_%02d", k);
        emit_json(config, stage, std::string("embed/") + tag + ".json", complex_to_json(K));
        emit_json(config, stage, std::string("embed/") + tag + "_certificate.json",
                  {{"vertices", K.vertex_count()},
                   {"dimension", K.dimension()},
                   {"pairs", cert.pairs},
                   {"max_ratio", cert.max_ratio},
                   {"max_rho_ratio", cert.max_rho_ratio},
                   {"lipschitz_violations", cert.lipschitz_violations},
                   {"sandwich_violations", cert.sandwich_violations},
                   {"rho_violations", cert.rho_violations}});
        std::vector<ComplexPoint> vertices;
        for (int v = 0; v < K.vertex_count(); ++v) vertices.push_back(ComplexPoint::vertex(v));
        emit_json(config, stage, std::string("embed/") + tag + "_cloud.json", cloud_to_json(hilbert_embed(K, vertices, 0)));
        const std::string name(tag);
        stage.checks.push_back(check_le(name + " pairs with |qx - qy| > 3 d + 1e-9", static_cast<double>(cert.lipschitz_violations), 0.0, 0.0, false));
        stage.checks.push_back(check_le(name + " samples with rho outside [l/2, l]", static_cast<double>(cert.sandwich_violations), 0.0, 0.0, false));
        stage.checks.push_back(check_le(name + " pairs with |rho x - rho y| > d + 1e-9", static_cast<double>(cert.rho_violations), 0.0, 0.0, false));
    }
    return stage;
}

namespace {

Eigen::MatrixXd cloud_as_map(const EmbeddedCloud& cloud, int n, const std::string& origin) {
    if (static_cast<int>(cloud.ids.size()) != n)
        throw Error(ErrorKind::InvalidInput, origin + ": cloud has " + std::to_string(cloud.ids.size()) +
                                                 " vectors for " + std::to_string(n) + " vertices");
    Eigen::MatrixXd f(n, cloud.coords.cols());
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < cloud.ids.size(); ++i) {
        int v = -1;
        const auto& id = cloud.ids[i];
        const auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), v);
        if (ec != std::errc() || ptr != id.data() + id.size() || v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
            throw Error(ErrorKind::InvalidInput, origin + ": bad vertex id '" + id + "'");
        seen[static_cast<std::size_t>(v)] = 1;
        f.row(v) = cloud.coords.row(static_cast<Eigen::Index>(i));
    }
    return f;
}

EmbeddedCloud map_as_cloud(const Eigen::MatrixXd& f, const std::string& provenance) {
    EmbeddedCloud cloud;
    for (Eigen::Index i = 0; i < f.rows(); ++i) cloud.ids.push_back(std::to_string(i));
    cloud.coords = f;
    cloud.provenance = provenance;
    return cloud;
}

}  // namespace

StageResult run_audit(const ExperimentConfig& config) {
    StageResult stage;
    stage.name = "audit";
    const auto fam = load_family(config);
    const auto seed = seed_of(config);

    std::ostringstream census;
    census << "n,threshold,far_pairs,n2_over_8,fraction,k,max_near_ball,ball_bound\n";
    Json first_n = nullptr;
    for (std::size_t m = 0; m < fam.graphs.size(); ++m) {
        const auto c = far_pair_census(fam.graphs[m]);
        const std::string tag = member_tag(m, c.n);
        census << c.n << ',' << format_real(c.threshold) << ',' << c.far_pairs << ','
               << format_real(c.n * static_cast<double>(c.n) / 8.0) << ',' << format_real(c.fraction) << ',' << c.k
               << ',' << c.max_near_ball << ',' << format_real(c.ball_bound) << '\n';
        if (c.k >= 0)
            stage.checks.push_back(check_le(tag + " near ball <= 2 d^k", static_cast<double>(c.max_near_ball), c.ball_bound, 0.0, false));
        if (first_n.is_null() && c.meets_eighth()) first_n = c.n;
        if (!first_n.is_null())
            stage.checks.push_back(check_le(tag + " n^2/8 <= far pairs", c.n * static_cast<double>(c.n) / 8.0,
                                            static_cast<double>(c.far_pairs), 0.0, false));
    }
    emit_text(config, stage, "audit/census.csv", census.str());
    stage.summary["first_n_with_eighth"] = first_n;

    std::vector<std::pair<std::string, AuditOptions>> runs;
    for (const auto& s : config.audit_sources) {
        AuditOptions o;
        o.source = s == "spectral" ? AuditSource::Spectral : s == "lemma63" ? AuditSource::Lemma63 : AuditSource::Constant;
        o.spectral_dim = config.spectral_dim;
        o.seed = seed;
        runs.emplace_back(s, std::move(o));
    }
    if (!config.cloud_files.empty()) {
        AuditOptions o;
        o.source = AuditSource::User;
        o.seed = seed;
        if (config.cloud_files.size() != fam.graphs.size())
            throw Error(ErrorKind::InvalidInput, "need one cloud file per family member");
        for (std::size_t m = 0; m < fam.graphs.size(); ++m)
            o.user_maps.push_back(cloud_as_map(cloud_from_json(read_json_file(config.cloud_files[m])),
                                               fam.graphs[m].size(), config.cloud_files[m]));
        runs.emplace_back("user", std::move(o));
    }

    const ScaleSchedule schedule = scale_schedule(fam);
    stage.summary["schedule_monotone"] = schedule.n_monotone;
    stage.summary["schedule_proper"] = schedule.proper;
    for (const auto& [name, options] : runs) {
        for (std::size_t m = 0; m < fam.graphs.size(); ++m)
            emit_json(config, stage, "audit/cloud_" + name + "_" + member_tag(m, fam.graphs[m].size()) + ".json",
                      cloud_to_json(map_as_cloud(audit_map(fam, m, schedule, options), name)));
        const auto rows = obstruction_audit(fam, options);
        emit_text(config, stage, "audit/verdict_" + name + ".csv", verdict_csv(rows));
        for (std::size_t m = 0; m < rows.size(); ++m) {
            const auto& r = rows[m];
            const std::string tag = name + " " + member_tag(m, r.n);
            emit_text(config, stage, "audit/profile_" + name + "_" + member_tag(m, r.n) + ".csv", profile_csv(r.profile));
            stage.checks.push_back(check_le(tag + " min far |fx - fy|^2 <= 4 c0", r.min_far_sq, 4.0 * r.c0, 1e-6));
            stage.checks.push_back(check_le(tag + " rho1(threshold) <= 2 sqrt(c0)", r.rho1_at_threshold, 2.0 * std::sqrt(r.c0), 1e-6));
        }
    }
    return stage;
}

StageResult run_approx(const ExperimentConfig& config) {
    StageResult stage;
    stage.name = "approx";
    const auto seed = seed_of(config);
    std::vector<PLMap> maps;
    for (const auto& f : config.map_files) maps.push_back(plmap_from_json(read_json_file(f)));
    if (config.map_files.empty())
        for (int k = 0; k < config.approx_maps; ++k)
            maps.push_back(random_pl_map(1 + k % 3, substream_seed(seed, "approx-map", static_cast<std::uint64_t>(k))));
    for (std::size_t k = 0; k < maps.size(); ++k) {
        ApproximationOptions opt;
        opt.depth = config.approx_depth;
        opt.max_depth = config.approx_max_depth;
        opt.seed = substream_seed(seed, "approx-samples", k);
        const auto res = simplicial_approximation(maps[k], opt);
        char tag[32];
        std::snprintf(tag, sizeof tag, "map_%02zu", k);
        const std::string name(tag);
        emit_json(config, stage, "approx/" + name + ".json", plmap_to_json(maps[k]));
        emit_json(config, stage, "approx/" + name + "_result.json",
                  {{"subdivisions", res.subdivision.times},
                   {"vertices", res.subdivision.complex.vertex_count()},
                   {"lambda", res.lambda},
                   {"target_mesh", res.target_mesh},
                   {"mesh", res.mesh},
                   {"r_T", res.r_T},
                   {"mu", res.mu},
                   {"star_ok", res.star_ok},
                   {"star_total", res.star_total},
                   {"open_star_ok", res.open_star_ok},
                   {"open_star_total", res.open_star_total},
                   {"carrier_ok", res.carrier_ok},
                   {"samples", res.samples},
                   {"g_simplicial", res.g_simplicial},
                   {"homotopy_defined", res.homotopy_defined},
                   {"homotopy_lipschitz", res.homotopy_lipschitz},
                   {"g", res.g}});
        if (!is_simplicial(maps[k]))
            stage.checks.push_back(check_le(name + " mesh <= r_n/(4 lambda)", res.mesh, res.target_mesh, 0.0, false));
        stage.checks.push_back(check_le(name + " vertices failing the star condition", static_cast<double>(res.star_total - res.star_ok), 0.0, 0.0, false));
        stage.checks.push_back(check_le(name + " samples with g(x) outside the carrier of f(x)", static_cast<double>(res.samples - res.carrier_ok), 0.0, 0.0, false));
        stage.checks.push_back(check_le(name + " samples outside the open star", static_cast<double>(res.open_star_total - res.open_star_ok), 0.0, 0.0, false));
        stage.checks.push_back(check_le(name + " undefined homotopy", res.homotopy_defined ? 0.0 : 1.0, 0.0, 0.0, false));
    }
    return stage;
}

bool RunReport::pass() const {
    return std::all_of(stages.begin(), stages.end(), [](const StageResult& s) { return s.pass(); });
}

RunReport run_report(const ExperimentConfig& config) {
    validate_config(config);
    RunReport report;
    for (auto* stage : {run_gen, run_spectra, run_poincare, run_cover, run_nerve, run_embed, run_audit, run_approx})
        report.stages.push_back(stage(config));
    Json stages = Json::array();
    for (const auto& s : report.stages) stages.push_back(stage_to_json(s));
    write_json_file(path_in(config, "report.json"), {{"schema", "coarse-lab/report/1"},
                                                     {"config", config_to_json(config)},
                                                     {"pass", report.pass()},
                                                     {"stages", stages}});
    return report;
}

}  // namespace coarse
