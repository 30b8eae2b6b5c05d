#include <CLI11.hpp>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>

#include "coarse/error.hpp"
#include "coarse/pipeline.hpp"

using namespace coarse;

namespace {

void print_stage(const StageResult& stage) {
    std::size_t failed = 0;
    for (const auto& c : stage.checks) {
        if (c.pass) continue;
        ++failed;
        std::cerr << "FAIL [" << stage.name << "] " << c.name << ": " << format_real(c.lhs) << " > "
                  << format_real(c.rhs) << " (tolerance " << format_real(c.tolerance)
                  << (c.relative ? " relative" : " absolute") << ")\n";
    }
    std::cout << stage.name << ": " << (failed ? "FAIL" : "ok") << " (" << stage.checks.size() << " checks, "
              << failed << " failed, " << stage.artifacts.size() << " artifacts)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coarse geometry laboratory: covers, nerves, simplicial approximation, embeddings and expanders"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::uint64_t> seed;
    std::string out, config_file;
    std::optional<int> max_exact_n, trials;
    std::vector<std::string> settings;
    app.add_option("--seed", seed, "Master seed (required)");
    app.add_option("--out", out, "Output directory (default coarse_out, or $COARSE_OUT)");
    app.add_option("--max-exact-n", max_exact_n, "Largest n for exact Cheeger enumeration (default 24, at most 30)");
    app.add_option("--trials", trials, "Random maps per member for the Poincare check");
    app.add_option("--config", config_file, "Flat key = value configuration file");
    app.add_option("--set", settings, "Extra key=value setting (repeatable)");

    std::vector<int> sizes;
    std::optional<int> degree;
    std::vector<std::string> graphs, clouds, maps, sources;
    std::vector<double> lambdas;
    std::optional<int> depth, max_depth, complexes, pairs, map_count;

    auto* gen = app.add_subcommand("gen", "Generate random regular graphs");
    auto* spectra = app.add_subcommand("spectra", "Laplacian spectra and Cheeger constants");
    auto* poincare = app.add_subcommand("poincare", "Poincare inequality and 1-Lipschitz compression checks");
    auto* cover = app.add_subcommand("cover", "Greedy covers of the member graphs");
    auto* nerve = app.add_subcommand("nerve", "Nerves and nerve projections of the covers");
    auto* embed = app.add_subcommand("embed", "Certified embeddings of random class C0 complexes");
    auto* audit = app.add_subcommand("audit", "Far-pair census and compression audit of embeddings");
    auto* approx = app.add_subcommand("approx", "Simplicial approximation of PL maps");
    auto* report = app.add_subcommand("report", "Run every stage and write report.json");

    for (auto* sub : {gen, spectra, poincare, cover, nerve, audit, report}) {
        sub->add_option("--sizes", sizes, "Member sizes")->delimiter(',');
        sub->add_option("--degree", degree, "Regular degree");
        sub->add_option("--graph", graphs, "Graph JSON file to use instead of generating (repeatable)");
    }
    for (auto* sub : {cover, nerve}) sub->add_option("--lambda", lambdas, "Cover scale (repeatable)");
    audit->add_option("--cloud", clouds, "Embedding JSON per member, audited as a user map (repeatable)");
    audit->add_option("--source", sources, "Embedding sources: spectral, lemma63, constant")->delimiter(',');
    embed->add_option("--complexes", complexes, "Number of random complexes");
    embed->add_option("--pairs", pairs, "Sample pairs per complex");
    approx->add_option("--map", maps, "PL map JSON file (repeatable)");
    approx->add_option("--maps", map_count, "Number of random maps when no file is given");
    approx->add_option("--depth", depth, "Force this many barycentric subdivisions");
    approx->add_option("--max-depth", max_depth, "Largest subdivision depth tried");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_code(ErrorKind::Config);
    }

    try {
        ExperimentConfig config;
        if (!config_file.empty()) apply_config_text(config, read_text_file(config_file), config_file);
        if (const char* env = std::getenv("COARSE_OUT"); env && *env) config.out = env;
        for (const auto& s : settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw Error(ErrorKind::Config, "--set expects key=value, got '" + s + "'");
            apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
        }
        if (seed) config.seed = *seed;
        if (!out.empty()) config.out = out;
        if (max_exact_n) config.max_exact_n = *max_exact_n;
        if (trials) config.trials = *trials;
        if (!sizes.empty()) config.sizes = sizes;
        if (degree) config.degree = *degree;
        if (!graphs.empty()) config.graph_files = graphs;
        if (!lambdas.empty()) config.lambdas = lambdas;
        if (!clouds.empty()) config.cloud_files = clouds;
        if (audit->parsed() && !sources.empty()) config.audit_sources = sources;
        if (audit->parsed() && !clouds.empty() && sources.empty()) config.audit_sources.clear();
        if (complexes) config.embed_complexes = *complexes;
        if (pairs) config.embed_pairs = *pairs;
        if (!maps.empty()) config.map_files = maps;
        if (map_count) config.approx_maps = *map_count;
        if (depth) config.approx_depth = *depth;
        if (max_depth) config.approx_max_depth = *max_depth;
        validate_config(config);

        if (report->parsed()) {
            const auto rep = run_report(config);
            for (const auto& s : rep.stages) print_stage(s);
            std::cout << "report: " << (rep.pass() ? "ok" : "FAIL") << '\n';
            return rep.pass() ? 0 : exit_code(ErrorKind::Assertion);
        }
        const std::map<CLI::App*, std::function<StageResult(const ExperimentConfig&)>> stages{
            {gen, run_gen},     {spectra, run_spectra}, {poincare, run_poincare}, {cover, run_cover},
            {nerve, run_nerve}, {embed, run_embed},     {audit, run_audit},       {approx, run_approx}};
        for (const auto& [sub, run] : stages) {
            if (!sub->parsed()) continue;
            const auto stage = run(config);
            print_stage(stage);
            return stage_exit_code(stage);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
