#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarse/io.hpp"
#include "coarse/spectral.hpp"

namespace coarse {

struct ExperimentConfig {
    std::optional<std::uint64_t> seed;
    std::vector<int> sizes{16, 32, 64, 128, 256};
    int degree = 4;
    std::vector<double> lambdas{1.0, 2.0, 3.0};
    int trials = 1000;            // random maps per member for the Poincare check
    int lipschitz_maps = 100;     // random 1-Lipschitz maps per member
    int max_exact_n = 24;
    std::string out = "coarse_out";
    int cover_max_n = 128;        // cover and nerve stages skip larger members
    int embed_complexes = 5;
    int embed_pairs = 2000;
    int approx_maps = 6;
    int spectral_dim = 3;
    std::vector<std::string> audit_sources{"spectral", "lemma63"};
    // Optional inputs replacing generated data.
    std::vector<std::string> graph_files;
    std::vector<std::string> cloud_files;  // one per member, audited as source "user"
    std::vector<std::string> map_files;    // PL maps for the approx stage
    std::optional<int> approx_depth;
    int approx_max_depth = 8;
};

// Sets one key; unknown keys and malformed values are configuration errors.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
// Flat "key = value" lines; '#' starts a comment. Lists are comma separated.
void apply_config_text(ExperimentConfig& config, const std::string& text, const std::string& origin);
// Seed present, trials >= 1, n d even for every member, and so on.
void validate_config(const ExperimentConfig& config);
Json config_to_json(const ExperimentConfig& config);

// One asserted inequality lhs <= rhs with its tolerance.
struct Check {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    bool relative = true;   // lhs <= rhs (1 + tol), otherwise lhs <= rhs + tol
    bool pass = false;
};

Check check_le(std::string name, double lhs, double rhs, double tolerance, bool relative = true);

struct StageResult {
    std::string name;
    std::vector<std::string> artifacts;  // paths relative to the output directory
    std::vector<Check> checks;
    Json summary = Json::object();
    bool pass() const;
};

Json stage_to_json(const StageResult& stage);

// Exit code for a finished stage: 0, or 6 when a check failed.
int stage_exit_code(const StageResult& stage);

// Members from graph_files when given, otherwise generated from the seed.
ExpanderFamily load_family(const ExperimentConfig& config);

StageResult run_gen(const ExperimentConfig& config);
StageResult run_spectra(const ExperimentConfig& config);
StageResult run_poincare(const ExperimentConfig& config);
StageResult run_cover(const ExperimentConfig& config);
StageResult run_nerve(const ExperimentConfig& config);
StageResult run_embed(const ExperimentConfig& config);
StageResult run_audit(const ExperimentConfig& config);
StageResult run_approx(const ExperimentConfig& config);

// Every stage in order, then report.json.
struct RunReport {
    std::vector<StageResult> stages;
    bool pass() const;
};

RunReport run_report(const ExperimentConfig& config);

}  // namespace coarse
