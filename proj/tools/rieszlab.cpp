#include "riesz/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace riesz;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// t-sequence spec: a constant, "1-1/k", or "1-<c>/k"
std::vector<double> parse_t_sequence(const std::string& spec, int blocks) {
    std::vector<double> t(blocks);
    char* end = nullptr;
    const double c = std::strtod(spec.c_str(), &end);
    if (end && *end == '\0') {
        std::fill(t.begin(), t.end(), c);
        return t;
    }
    double num = 1.0;
    if (spec == "1-1/k") {
        num = 1.0;
    } else if (spec.rfind("1-", 0) == 0 && spec.size() > 4 &&
               spec.compare(spec.size() - 2, 2, "/k") == 0) {
        num = std::strtod(spec.c_str() + 2, &end);
        if (!end || std::string(end) != "/k")
            throw ConfigError("cannot parse t sequence \"" + spec + "\"");
    } else {
        throw ConfigError("cannot parse t sequence \"" + spec + "\" (use a constant, "
                          "\"1-1/k\", or \"1-c/k\")");
    }
    for (int k = 1; k <= blocks; ++k) t[k - 1] = 1.0 - num / k;
    return t;
}

// "gaussian:1.0" -> gaussian scaled to the given full-line integral
PotentialPart parse_potential_flag(const std::string& spec, double sigma) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    PotentialPart p;
    if (name == "gaussian") {
        p.catalog = PotentialPart::Catalog::Gaussian;
        p.sigma = sigma;
    } else if (name == "box") {
        p.catalog = PotentialPart::Catalog::Box;
        p.x1 = -0.5;
        p.x2 = 0.5;
    } else if (name == "power_decay") {
        p.catalog = PotentialPart::Catalog::PowerDecay;
        p.eps = 1.0;
    } else {
        throw ConfigError("unknown potential \"" + name + "\"");
    }
    if (colon != std::string::npos) {
        const double target = std::stod(spec.substr(colon + 1));
        p.amplitude *= target / p.integral(HUGE_VAL, 1e-12);
    }
    return p;
}

int run_guarded(const std::string& stage, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "rieszlab: %s: %s\n", stage.c_str(), e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "rieszlab: numerical failure in %s: %s\n", stage.c_str(), e.what());
        return kExitNumerical;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rieszlab: spectral perturbation laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    bool serial = false;
    app.add_flag("--serial", serial, "run data-parallel kernels on the serial reference path");

    auto add_config = [&](CLI::App* sub, bool required = true) {
        auto* opt = sub->add_option("config", config_path, "scenario config (JSON)");
        if (required) opt->required();
        sub->add_option("--out", out_dir, "override the output directory");
    };

    CLI::App* c_run = app.add_subcommand("run", "run the config's stage list");
    add_config(c_run);

    CLI::App* c_validate = app.add_subcommand("validate", "validate a config");
    bool strict = false;
    add_config(c_validate);
    c_validate->add_flag("--strict", strict, "treat admissibility warnings as errors");

    std::vector<std::string> single_stages = {"spectrum", "formmatrix", "enclose",
                                              "correct",  "diagnose"};
    std::vector<CLI::App*> stage_subs;
    for (const auto& s : single_stages) {
        CLI::App* sub = app.add_subcommand(s, "run the " + s + " stage");
        add_config(sub);
        stage_subs.push_back(sub);
    }

    CLI::App* c_asym = app.add_subcommand("asym", "asymptotic-law checks");
    c_asym->add_option("config", config_path, "scenario config (JSON, optional)");
    c_asym->add_option("--out", out_dir, "output directory");
    std::string check, potential_flag, model_flag;
    double beta = 0, q_flag = -2, tau_flag = 0, sigma_flag = 0.5, l_flag = 1.0;
    int n_lo = 0, n_hi = 0, k_lo = 0, k_hi = 0;
    c_asym->add_option("--check", check, "mu_gaps | lambda1 | lq | two_term");
    c_asym->add_option("--beta", beta, "well exponent");
    c_asym->add_option("--potential", potential_flag, "catalog:integral, e.g. gaussian:1.0");
    c_asym->add_option("--sigma", sigma_flag, "gaussian width for --potential");
    c_asym->add_option("--model", model_flag, "neumann | harmonic_exact | single_well");
    c_asym->add_option("--l", l_flag, "interval half-length for --model neumann");
    c_asym->add_option("--n-lo", n_lo, "lambda1 range start");
    c_asym->add_option("--n-hi", n_hi, "lambda1 range end");
    c_asym->add_option("--k-lo", k_lo, "lq / mu_gaps range start");
    c_asym->add_option("--k-hi", k_hi, "lq / mu_gaps range end");
    c_asym->add_option("--q", q_flag, "Lq exponent (-1 for infinity)");
    c_asym->add_option("--tau", tau_flag, "weight power in (1+x^2)^{tau/2}");

    CLI::App* c_counter = app.add_subcommand("counterexample", "block counterexample");
    double ce_gamma = 1.0;
    int ce_blocks = 50;
    std::string ce_t = "0.6";
    c_counter->add_option("--gamma", ce_gamma, "diagonal growth exponent");
    c_counter->add_option("--t", ce_t, "coupling: constant, \"1-1/k\", or \"1-c/k\"");
    c_counter->add_option("--blocks", ce_blocks, "number of 2x2 blocks");
    c_counter->add_option("--out", out_dir, "output directory");

    CLI::App* c_plot = app.add_subcommand("plotdata", "plot-ready data from reports");
    std::string plot_kind;
    add_config(c_plot);
    c_plot->add_option("--kind", plot_kind, "enclosure | residuals | projnorms | lambda1")
        ->required();

    CLI11_PARSE(app, argc, argv);
    const Exec exec = serial ? Exec::Serial : Exec::OpenMP;

    if (c_validate->parsed()) {
        ValidationReport rep;
        const int rc = run_guarded("validate", [&] { rep = validate_config_file(config_path, strict); });
        if (rc != 0) return rc;
        for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
        for (const auto& e : rep.errors) std::printf("error: %s\n", e.c_str());
        std::printf(rep.ok ? "ok\n" : "invalid\n");
        return rep.ok ? 0 : kExitValidation;
    }

    if (c_counter->parsed()) {
        return run_guarded("counterexample", [&] {
            const std::vector<double> t = parse_t_sequence(ce_t, ce_blocks);
            const CounterexampleBlocks blocks = counterexample_blocks(ce_gamma, t, ce_blocks);
            const std::string flags = ce_t + "/" + std::to_string(ce_blocks) + "/" +
                                      format_num(ce_gamma);
            write_counterexample(blocks, out_dir.empty() ? "out" : out_dir,
                                 fnv1a64(flags.data(), flags.size()));
        });
    }

    // everything below works from a config (possibly synthesized for asym)
    ScenarioConfig cfg;
    if (!config_path.empty()) {
        const int rc = run_guarded("parse", [&] { cfg = parse_config(config_path); });
        if (rc != 0) return rc;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;

    if (c_plot->parsed())
        return run_guarded("plotdata",
                           [&] { emit_plotdata(cfg.out_dir, plot_kind, cfg.config_hash); });

    if (c_asym->parsed()) {
        return run_guarded("asym", [&] {
            if (!check.empty()) cfg.asym.check = check;
            if (beta > 0) cfg.asym.beta = beta;
            if (n_lo > 0) cfg.asym.n_lo = n_lo;
            if (n_hi > 0) cfg.asym.n_hi = n_hi;
            if (k_lo > 0) cfg.asym.k_lo = k_lo;
            if (k_hi > 0) cfg.asym.k_hi = k_hi;
            if (q_flag > -2) cfg.asym.q = q_flag;
            cfg.asym.tau = tau_flag;
            if (!model_flag.empty() || (!cfg.has_model && beta > 0)) {
                const std::string kind = !model_flag.empty()
                                             ? model_flag
                                             : (cfg.asym.beta == 2.0 ? "harmonic_exact"
                                                                     : "single_well");
                if (kind == "neumann")
                    cfg.model = Model::neumann(l_flag);
                else if (kind == "harmonic_exact")
                    cfg.model = Model::harmonic();
                else if (kind == "single_well")
                    cfg.model = Model::single_well(cfg.asym.beta);
                else
                    throw ConfigError("unknown model \"" + kind + "\"");
                cfg.has_model = true;
            }
            if (!potential_flag.empty()) {
                cfg.pert = PerturbationSpec{};
                cfg.pert.potentials.push_back(parse_potential_flag(potential_flag, sigma_flag));
            }
            if (cfg.config_hash == 0) {
                std::string key = cfg.asym.check + "/" + format_num(cfg.asym.beta) + "/" +
                                  potential_flag + "/" + model_flag;
                cfg.config_hash = fnv1a64(key.data(), key.size());
            }
            run_scenario(cfg, {"asym"}, exec);
        });
    }

    std::vector<std::string> stages;
    std::string stage_name = "run";
    if (c_run->parsed()) {
        stages = {};
    } else {
        for (std::size_t i = 0; i < stage_subs.size(); ++i)
            if (stage_subs[i]->parsed()) {
                stages = {single_stages[i]};
                stage_name = single_stages[i];
            }
    }
    return run_guarded(stage_name, [&] { run_scenario(cfg, stages, exec); });
}
