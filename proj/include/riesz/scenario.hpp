#pragma once

#include "riesz/asymptotics.hpp"
#include "riesz/corrections.hpp"
#include "riesz/diagnostics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace riesz {

inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double quadrature = 1e-10;
    double root = 1e-12;
    double noise_floor = 1e-12;
};

struct AsymOptions {
    std::string check; // mu_gaps | lambda1 | lq | two_term
    double beta = 2.0;
    int n_lo = 20, n_hi = 200;
    int k_lo = 50, k_hi = 300;
    double q = 2.0; // <= 0 means infinity
    double tau = 0.0;
};

struct ScenarioConfig {
    Model model = Model::harmonic();
    bool has_model = false;
    PerturbationSpec pert;
    int M = 128;
    int working_range = 0; // 0 -> 4*M
    std::vector<std::string> stages;
    int corr_lo = 1;
    int corr_hi = 0; // 0 -> min(M/2, 200)
    int enclosure_k_hi = 0; // 0 -> 9M/10
    int schur_range = 0;    // 0 -> min(M/2, 100)
    std::optional<std::pair<double, double>> user_alpha; // (alpha, Mb)
    AsymOptions asym;
    Tolerances tol;
    std::string out_dir = "out";
    std::uint64_t config_hash = 0;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
};

/// Strict parse: unknown keys are hard errors.
ScenarioConfig parse_config(const std::string& path);

/// Schema plus admissibility predicates; predicate failures are warnings
/// unless `strict`.
ValidationReport validate_config_file(const std::string& path, bool strict);

/// Executes the requested stages in dependency order; empty list means the
/// config's own stage list. Writes reports into cfg.out_dir.
void run_scenario(ScenarioConfig& cfg, const std::vector<std::string>& stages = {},
                  Exec exec = Exec::OpenMP);

/// Counterexample CSV (closed form vs oracle).
void write_counterexample(const CounterexampleBlocks& blocks, const std::string& out_dir,
                          std::uint64_t config_hash);

/// Two-column plot data extracted from a previously written report.
void emit_plotdata(const std::string& out_dir, const std::string& kind,
                   std::uint64_t config_hash);

/// Whole-file atomic write (temp file + rename).
void write_atomic(const std::string& path, const std::string& content);

std::string format_num(double v);

} // namespace riesz
