#include "riesz/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace riesz {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    fs::rename(tmp, path);
}

namespace {

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string csv_header(std::uint64_t hash) {
    return std::string("# rieszlab ") + kToolVersion + " config=" + hash_hex(hash) + "\n";
}

void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
}

double get_num(const json& j, const char* key, const std::string& where,
               std::optional<double> def = {}) {
    if (!j.contains(key)) {
        if (def) return *def;
        throw ConfigError(std::string("missing \"") + key + "\" in " + where);
    }
    if (!j[key].is_number()) throw ConfigError(std::string("\"") + key + "\" must be a number in " + where);
    return j[key].get<double>();
}

cx get_complex(const json& j, const char* key, const std::string& where,
               std::optional<cx> def = {}) {
    if (!j.contains(key)) {
        if (def) return *def;
        throw ConfigError(std::string("missing \"") + key + "\" in " + where);
    }
    const json& v = j[key];
    if (v.is_number()) return cx{v.get<double>(), 0.0};
    if (!v.is_object()) throw ConfigError(std::string("\"") + key + "\" must be a number or {re, im} in " + where);
    expect_keys(v, {"re", "im"}, where + "." + key);
    return cx{get_num(v, "re", where, 0.0), get_num(v, "im", where, 0.0)};
}

Model parse_model(const json& j) {
    expect_keys(j, {"kind", "l", "beta", "mu", "gamma", "power_gamma", "gap", "low_index_threshold"},
                "model");
    const std::string kind = j.at("kind").get<std::string>();
    Model m = Model::harmonic();
    if (kind == "neumann") {
        m = Model::neumann(get_num(j, "l", "model", 1.0));
    } else if (kind == "single_well") {
        const double beta = get_num(j, "beta", "model");
        if (!(beta > 1)) throw ConfigError("model: beta must exceed 1");
        m = Model::single_well(beta, static_cast<int>(get_num(j, "low_index_threshold", "model", 10.0)));
    } else if (kind == "harmonic_exact") {
        m = Model::harmonic();
    } else if (kind == "diagonal") {
        if (j.contains("mu")) {
            std::vector<double> mu = j.at("mu").get<std::vector<double>>();
            m = Model::diagonal(std::move(mu), get_num(j, "gamma", "model"));
        } else if (j.contains("power_gamma")) {
            m = Model::power_sequence(get_num(j, "power_gamma", "model"));
        } else {
            throw ConfigError("model: diagonal requires \"mu\" or \"power_gamma\"");
        }
    } else {
        throw ConfigError("model: unknown kind \"" + kind + "\"");
    }
    if (j.contains("gap")) {
        const json& g = j.at("gap");
        expect_keys(g, {"gamma", "kappa", "n0"}, "model.gap");
        GapParams gp = m.gaps();
        gp.gamma = get_num(g, "gamma", "model.gap", gp.gamma);
        gp.kappa = get_num(g, "kappa", "model.gap", gp.kappa);
        gp.n0 = static_cast<int>(get_num(g, "n0", "model.gap", gp.n0));
        m.set_gaps(gp);
    }
    return m;
}

PotentialPart parse_potential(const json& j, const std::string& where) {
    expect_keys(j,
                {"type", "catalog", "amplitude", "sigma", "center", "x1", "x2", "eps", "xs", "vs",
                 "window", "decay_tag", "normalize_integral"},
                where);
    PotentialPart p;
    const std::string cat = j.at("catalog").get<std::string>();
    if (cat == "gaussian") {
        p.catalog = PotentialPart::Catalog::Gaussian;
        p.sigma = get_num(j, "sigma", where, 1.0);
        p.center = get_num(j, "center", where, 0.0);
        if (!(p.sigma > 0)) throw ConfigError(where + ": sigma must be positive");
    } else if (cat == "box") {
        p.catalog = PotentialPart::Catalog::Box;
        p.x1 = get_num(j, "x1", where);
        p.x2 = get_num(j, "x2", where);
        if (!(p.x2 > p.x1)) throw ConfigError(where + ": box needs x2 > x1");
    } else if (cat == "power_decay") {
        p.catalog = PotentialPart::Catalog::PowerDecay;
        p.eps = get_num(j, "eps", where);
        if (!(p.eps > 0)) throw ConfigError(where + ": power_decay needs eps > 0");
    } else if (cat == "sampled") {
        p.catalog = PotentialPart::Catalog::Sampled;
        p.xs = j.at("xs").get<std::vector<double>>();
        p.vs = j.at("vs").get<std::vector<double>>();
        if (p.xs.size() != p.vs.size() || p.xs.size() < 2)
            throw ConfigError(where + ": sampled grid needs matching xs/vs of length >= 2");
        if (!std::is_sorted(p.xs.begin(), p.xs.end()))
            throw ConfigError(where + ": sampled xs must be increasing");
    } else {
        throw ConfigError(where + ": unknown catalog \"" + cat + "\"");
    }
    p.amplitude = get_complex(j, "amplitude", where, cx{1.0, 0.0});
    if (j.contains("window")) {
        const auto w = j.at("window").get<std::vector<double>>();
        if (w.size() != 2 || !(w[1] > w[0]))
            throw ConfigError(where + ": window must be [lo, hi] with hi > lo");
        p.window = {{w[0], w[1]}};
    }
    if (j.contains("decay_tag")) {
        const json& d = j.at("decay_tag");
        expect_keys(d, {"p", "tau"}, where + ".decay_tag");
        p.decay_tag = {{get_num(d, "p", where), get_num(d, "tau", where)}};
    }
    if (j.contains("normalize_integral")) {
        const double target = get_num(j, "normalize_integral", where);
        const cx cur = p.integral(HUGE_VAL, 1e-12);
        if (std::abs(cur) == 0) throw ConfigError(where + ": cannot normalize a zero integral");
        p.amplitude *= target / cur;
    }
    return p;
}

PerturbationSpec parse_perturbation(const json& j) {
    expect_keys(j, {"parts"}, "perturbation");
    PerturbationSpec spec;
    int idx = 0;
    for (const json& part : j.at("parts")) {
        const std::string where = "perturbation.parts[" + std::to_string(idx++) + "]";
        const std::string type = part.at("type").get<std::string>();
        if (type == "potential") {
            spec.potentials.push_back(parse_potential(part, where));
        } else if (type == "delta_sum") {
            expect_keys(part, {"type", "points"}, where);
            DeltaSumPart d;
            for (const json& pt : part.at("points")) {
                expect_keys(pt, {"nu", "x"}, where + ".points");
                d.points.push_back({get_complex(pt, "nu", where), get_num(pt, "x", where)});
            }
            if (d.points.empty()) throw ConfigError(where + ": delta_sum needs points");
            spec.delta_sums.push_back(std::move(d));
        } else if (type == "robin") {
            expect_keys(part, {"type", "nu_plus", "nu_minus"}, where);
            RobinPart r;
            r.nu_plus = get_complex(part, "nu_plus", where, cx{0, 0});
            r.nu_minus = get_complex(part, "nu_minus", where, cx{0, 0});
            spec.robins.push_back(r);
        } else if (type == "band_matrix") {
            expect_keys(part, {"type", "bands"}, where);
            BandPart b;
            for (const json& band : part.at("bands")) {
                expect_keys(band, {"offset", "coef", "omega"}, where + ".bands");
                BandPart::Band bb;
                bb.offset = static_cast<int>(get_num(band, "offset", where));
                bb.coef = get_complex(band, "coef", where, cx{1, 0});
                bb.omega = get_num(band, "omega", where, 0.0);
                b.bands.push_back(bb);
            }
            if (b.bands.empty()) throw ConfigError(where + ": band_matrix needs bands");
            spec.band_parts.push_back(std::move(b));
        } else {
            throw ConfigError(where + ": unknown part type \"" + type + "\"");
        }
    }
    return spec;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return j;
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    return fnv1a64(bytes.data(), bytes.size());
}

const std::vector<std::string> kStageOrder = {"spectrum", "formmatrix", "enclose",
                                              "correct",  "diagnose",   "asym"};

ScenarioConfig parse_config_json(const json& j) {
    expect_keys(j,
                {"model", "perturbation", "truncation", "stages", "corrections", "enclosure",
                 "diagnostics", "asym", "alpha", "tolerances", "output"},
                "config");
    ScenarioConfig cfg;
    if (j.contains("model")) {
        cfg.model = parse_model(j.at("model"));
        cfg.has_model = true;
    }
    if (j.contains("perturbation")) cfg.pert = parse_perturbation(j.at("perturbation"));
    if (j.contains("truncation")) {
        const json& t = j.at("truncation");
        expect_keys(t, {"M", "working_range"}, "truncation");
        cfg.M = static_cast<int>(get_num(t, "M", "truncation", 128.0));
        cfg.working_range = static_cast<int>(get_num(t, "working_range", "truncation", 0.0));
        if (cfg.M < 2) throw ConfigError("truncation: M must be >= 2");
    }
    if (j.contains("stages")) {
        for (const json& s : j.at("stages")) {
            const std::string name = s.get<std::string>();
            if (std::find(kStageOrder.begin(), kStageOrder.end(), name) == kStageOrder.end())
                throw ConfigError("stages: unknown stage \"" + name + "\"");
            cfg.stages.push_back(name);
        }
    }
    if (j.contains("corrections")) {
        const json& c = j.at("corrections");
        expect_keys(c, {"n_lo", "n_hi"}, "corrections");
        cfg.corr_lo = static_cast<int>(get_num(c, "n_lo", "corrections", 1.0));
        cfg.corr_hi = static_cast<int>(get_num(c, "n_hi", "corrections", 0.0));
    }
    if (j.contains("enclosure")) {
        const json& e = j.at("enclosure");
        expect_keys(e, {"k_hi"}, "enclosure");
        cfg.enclosure_k_hi = static_cast<int>(get_num(e, "k_hi", "enclosure", 0.0));
    }
    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        expect_keys(d, {"schur_range"}, "diagnostics");
        cfg.schur_range = static_cast<int>(get_num(d, "schur_range", "diagnostics", 0.0));
    }
    if (j.contains("asym")) {
        const json& a = j.at("asym");
        expect_keys(a, {"check", "beta", "n_lo", "n_hi", "k_lo", "k_hi", "q", "tau"}, "asym");
        cfg.asym.check = a.value("check", std::string());
        cfg.asym.beta = get_num(a, "beta", "asym", 2.0);
        cfg.asym.n_lo = static_cast<int>(get_num(a, "n_lo", "asym", 20.0));
        cfg.asym.n_hi = static_cast<int>(get_num(a, "n_hi", "asym", 200.0));
        cfg.asym.k_lo = static_cast<int>(get_num(a, "k_lo", "asym", 50.0));
        cfg.asym.k_hi = static_cast<int>(get_num(a, "k_hi", "asym", 300.0));
        if (a.contains("q")) {
            if (a.at("q").is_string()) {
                if (a.at("q").get<std::string>() != "inf")
                    throw ConfigError("asym: q must be a number or \"inf\"");
                cfg.asym.q = -1.0;
            } else {
                cfg.asym.q = get_num(a, "q", "asym");
            }
        }
        cfg.asym.tau = get_num(a, "tau", "asym", 0.0);
    }
    if (j.contains("alpha")) {
        const json& al = j.at("alpha");
        expect_keys(al, {"alpha", "mb"}, "alpha");
        cfg.user_alpha = {{get_num(al, "alpha", "alpha"), get_num(al, "mb", "alpha")}};
    }
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        expect_keys(t, {"quadrature", "root", "noise_floor"}, "tolerances");
        cfg.tol.quadrature = get_num(t, "quadrature", "tolerances", 1e-10);
        cfg.tol.root = get_num(t, "root", "tolerances", 1e-12);
        cfg.tol.noise_floor = get_num(t, "noise_floor", "tolerances", 1e-12);
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        expect_keys(o, {"dir"}, "output");
        cfg.out_dir = o.value("dir", std::string("out"));
    }
    return cfg;
}

} // namespace

ScenarioConfig parse_config(const std::string& path) {
    ScenarioConfig cfg;
    try {
        cfg = parse_config_json(load_json(path));
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.config_hash = hash_file(path);
    return cfg;
}

ValidationReport validate_config_file(const std::string& path, bool strict) {
    ValidationReport rep;
    ScenarioConfig cfg;
    try {
        cfg = parse_config(path);
    } catch (const std::exception& e) {
        rep.ok = false;
        rep.errors.push_back(e.what());
        return rep;
    }
    auto note = [&](const std::string& msg) {
        if (strict) {
            rep.errors.push_back(msg);
            rep.ok = false;
        } else {
            rep.warnings.push_back(msg);
        }
    };
    const double gamma = cfg.model.gaps().gamma;
    if (cfg.user_alpha) {
        const auto [alpha, mb] = *cfg.user_alpha;
        if (!(2.0 * alpha + gamma > 1.0))
            note("supplied alpha violates 2*alpha + gamma > 1 (inadmissible)");
        if (!(mb > 0)) note("supplied Mb is not positive");
    }
    if (cfg.model.kind() == ModelKind::SingleWell || cfg.model.kind() == ModelKind::HarmonicExact) {
        const double beta = cfg.model.beta();
        for (const auto& p : cfg.pert.potentials) {
            if (p.decay_tag) {
                const auto [pp, tau] = *p.decay_tag;
                try {
                    predicted_alpha(beta, {PerturbationClass::LpTau, pp, tau, 0, false, 0.01});
                } catch (const std::exception&) {
                    note("potential decay tag (p=" + format_num(pp) + ", tau=" + format_num(tau) +
                         ") violates the admissibility inequality for beta=" + format_num(beta));
                }
            }
        }
    }
    if (!cfg.pert.robins.empty() && cfg.model.kind() != ModelKind::NeumannInterval) {
        rep.errors.push_back("robin parts require the Neumann interval model");
        rep.ok = false;
    }
    for (const auto& b : cfg.pert.band_parts) {
        if (cfg.model.kind() != ModelKind::DiagonalSequence)
            note("band-matrix parts usually pair with a diagonal model");
        if (!(b.max_omega() < gamma - 1.0))
            note("band growth omega >= gamma - 1: subordination condition fails");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

namespace {

struct Pipeline {
    ScenarioConfig& cfg;
    Exec exec;
    std::optional<FormMatrix> fm;
    std::optional<AlphaFit> afit;
    std::optional<GalerkinResult> oracle;
    std::optional<EnclosureParams> ep;
    std::optional<EnclosureLayout> layout;
    std::vector<CorrectionRecord> records;

    int working_range() const { return cfg.working_range > 0 ? cfg.working_range : 4 * cfg.M; }
    int k_hi() const {
        return cfg.enclosure_k_hi > 0 ? std::min(cfg.enclosure_k_hi, cfg.M) : 9 * cfg.M / 10;
    }

    void ensure_form() {
        if (fm) return;
        const fs::path cache_dir = fs::path(cfg.out_dir) / "cache";
        fs::create_directories(cache_dir);
        const fs::path cache = cache_dir / ("fm_" + hash_hex(cfg.config_hash) + "_M" +
                                            std::to_string(cfg.M) + ".rzfm");
        if (fs::exists(cache)) {
            FormMatrix loaded = load_form_cache(cache.string());
            if (loaded.M == cfg.M) {
                loaded.gamma = cfg.model.gaps().gamma;
                cfg.model.prepare(cfg.M);
                fm = std::move(loaded);
                return;
            }
        }
        fm = form_matrix(cfg.model, cfg.pert, cfg.M, exec, cfg.tol.quadrature);
        save_form_cache(*fm, cache.string());
    }

    void ensure_alpha() {
        if (afit) return;
        ensure_form();
        if (cfg.user_alpha) {
            AlphaFit f;
            f.alpha = cfg.user_alpha->first;
            f.mb = cfg.user_alpha->second;
            f.admissible = 2.0 * f.alpha + cfg.model.gaps().gamma > 1.0;
            afit = f;
            return;
        }
        afit = fit_alpha(*fm, cfg.model.gaps().gamma, cfg.tol.noise_floor);
        fm->alpha_fit = afit->alpha;
        fm->mb_fit = afit->mb;
        fm->admissible = afit->admissible;
    }

    void ensure_oracle() {
        if (oracle) return;
        ensure_form();
        oracle = galerkin_spectrum(cfg.model, *fm, layout ? &*layout : nullptr);
    }

    void ensure_enclosure() {
        if (layout) return;
        ensure_alpha();
        const std::vector<double> mu = cfg.model.mu_vector(working_range());
        ep = find_enclosure_params(mu, cfg.model.gaps(), afit->alpha, afit->mb, k_hi(), {}, exec);
        layout = make_enclosure_layout(mu, cfg.model.gaps(), ep->N, ep->h, k_hi());
    }

    void ensure_records() {
        if (!records.empty()) return;
        ensure_enclosure();
        ensure_oracle();
        const int hi = cfg.corr_hi > 0 ? cfg.corr_hi : std::min(cfg.M / 2, 200);
        records = correction_report(cfg.model, *fm, *oracle, cfg.corr_lo, hi,
                                    &cfg.model.gaps(), afit->alpha, afit->mb, exec);
    }

    void stage_spectrum() {
        std::string out = csv_header(cfg.config_hash);
        out += "k,mu,gap,ratio_to_asymptotic\n";
        const std::vector<double> mu = cfg.model.mu_vector(cfg.M);
        for (int n = 1; n <= cfg.M; ++n) {
            out += std::to_string(n) + "," + format_num(mu[n - 1]) + ",";
            if (n < cfg.M) out += format_num(mu[n] - mu[n - 1]);
            out += "," + format_num(mu[n - 1] / cfg.model.mu_asym(n)) + "\n";
        }
        write_atomic((fs::path(cfg.out_dir) / "spectrum.csv").string(), out);
    }

    void stage_formmatrix() {
        ensure_alpha();
        std::string out = csv_header(cfg.config_hash);
        out += "m,n,re,im\n";
        for (int m = 1; m <= fm->M; ++m)
            for (int n = 1; n <= fm->M; ++n) {
                const cx v = fm->at(m, n);
                out += std::to_string(m) + "," + std::to_string(n) + "," +
                       format_num(v.real()) + "," + format_num(v.imag()) + "\n";
            }
        write_atomic((fs::path(cfg.out_dir) / "formmatrix.csv").string(), out);

        json meta;
        meta["tool_version"] = kToolVersion;
        meta["config_hash"] = hash_hex(cfg.config_hash);
        meta["M"] = fm->M;
        meta["alpha"] = afit->alpha;
        meta["mb"] = afit->mb;
        meta["admissible"] = afit->admissible;
        meta["fit_residual"] = afit->max_residual;
        meta["window_certified_up_to"] = fm->M;
        write_atomic((fs::path(cfg.out_dir) / "subordination.json").string(), meta.dump(2) + "\n");
    }

    void stage_enclose() {
        ensure_enclosure();
        ensure_oracle();
        std::vector<cx> below_edge(oracle->values.begin(),
                                   oracle->values.begin() + std::min<std::size_t>(
                                                                oracle->values.size(), k_hi()));
        const EnclosureReport rep = verify_enclosure(*layout, below_edge);
        json out;
        out["tool_version"] = kToolVersion;
        out["config_hash"] = hash_hex(cfg.config_hash);
        out["N"] = layout->N;
        out["h"] = layout->h;
        out["max_box_bound"] = ep->max_box_bound;
        out["max_strip_bound"] = ep->max_strip_bound;
        out["strip_count"] = rep.strip_count;
        out["sound"] = rep.sound;
        json boxes = json::array();
        for (const auto& bc : rep.boxes) {
            const Box b = layout->box(bc.k);
            boxes.push_back({{"k", bc.k},
                             {"re_lo", b.re_lo},
                             {"re_hi", b.re_hi},
                             {"im_half", b.im_half},
                             {"count", bc.count}});
        }
        out["boxes"] = boxes;
        json outside = json::array();
        for (const auto& s : rep.outside)
            outside.push_back({{"re", s.lambda.real()},
                               {"im", s.lambda.imag()},
                               {"nearest_k", s.nearest_k},
                               {"edge_zone", s.edge_zone}});
        out["outside"] = outside;
        write_atomic((fs::path(cfg.out_dir) / "enclosure.json").string(), out.dump(2) + "\n");
    }

    void stage_correct() {
        ensure_records();
        std::string out = csv_header(cfg.config_hash);
        out += "n,mu,re_lambda1,im_lambda1,re_lambda2,im_lambda2,re_oracle,im_oracle,"
               "residual1,residual2,proj_norm\n";
        for (const auto& r : records) {
            out += std::to_string(r.n) + "," + format_num(r.mu_n) + "," +
                   format_num(r.l1.real()) + "," + format_num(r.l1.imag()) + "," +
                   format_num(r.l2.real()) + "," + format_num(r.l2.imag()) + "," +
                   format_num(r.oracle.real()) + "," + format_num(r.oracle.imag()) + "," +
                   format_num(r.residual1) + "," + format_num(r.residual2) + "," +
                   format_num(r.proj_norm) + "\n";
        }
        write_atomic((fs::path(cfg.out_dir) / "corrections.csv").string(), out);
    }

    void stage_diagnose() {
        ensure_records();
        ensure_alpha();
        const double gamma = cfg.model.gaps().gamma;
        const RieszReport rep = riesz_report(records, afit->alpha, gamma);
        const int srange = cfg.schur_range > 0 ? cfg.schur_range : std::min(cfg.M / 2, 100);
        const SchurSums schur = schur_row_sums(cfg.model.mu_vector(2 * srange), cfg.model.gaps(),
                                               afit->alpha, srange);
        json out;
        out["tool_version"] = kToolVersion;
        out["config_hash"] = hash_hex(cfg.config_hash);
        out["sup_proj_norm"] = rep.sup_proj_norm;
        out["proj_slope"] = rep.proj_slope;
        out["bari_partial"] = rep.bari_partial;
        out["bari_predicate"] = rep.bari_predicate;
        out["admissible"] = rep.admissible;
        out["schur_max_row"] = schur.max_row;
        out["schur_max_col"] = schur.max_col;
        write_atomic((fs::path(cfg.out_dir) / "diagnostics.json").string(), out.dump(2) + "\n");
    }

    void write_fit_csv(const std::string& name, const std::string& xcol, const FitReport& rep) {
        std::string out = csv_header(cfg.config_hash);
        out += xcol + ",observed,target,ratio\n";
        for (const auto& p : rep.points)
            out += format_num(p.k) + "," + format_num(p.observed) + "," + format_num(p.target) +
                   "," + format_num(p.ratio) + "\n";
        write_atomic((fs::path(cfg.out_dir) / name).string(), out);
    }

    void stage_asym() {
        const AsymOptions& a = cfg.asym;
        if (a.check.empty()) throw ConfigError("asym: no check selected");
        json summary;
        summary["tool_version"] = kToolVersion;
        summary["config_hash"] = hash_hex(cfg.config_hash);
        summary["check"] = a.check;
        if (a.check == "mu_gaps") {
            const MuGapReport rep = check_mu_and_gaps(a.beta, a.k_lo, a.k_hi);
            write_fit_csv("mu_asym.csv", "k", rep.mu);
            write_fit_csv("gaps_asym.csv", "k", rep.gap);
            summary["mu_terminal_ratio"] = rep.mu.terminal_ratio;
            summary["mu_drift"] = rep.mu.drift;
            summary["gap_terminal_ratio"] = rep.gap.terminal_ratio;
            summary["gap_drift"] = rep.gap.drift;
        } else if (a.check == "lambda1") {
            if (!cfg.has_model) throw ConfigError("asym lambda1: needs a model section");
            FitReport rep =
                check_lambda1_asym(cfg.model, cfg.pert, a.n_lo, a.n_hi, 40, cfg.tol.quadrature);
            write_fit_csv("lambda1_asym.csv", "n", rep);
            summary["terminal_ratio"] = rep.terminal_ratio;
            summary["drift"] = rep.drift;
        } else if (a.check == "lq") {
            if (!cfg.has_model) throw ConfigError("asym lq: needs a model section");
            const double q = a.q <= 0 ? HUGE_VAL : a.q;
            FitReport rep = check_lq_norms(cfg.model, q, a.tau, a.k_lo, a.k_hi);
            write_fit_csv("lq_norms.csv", "k", rep);
            summary["fitted_slope"] = rep.fitted_slope;
            summary["target_exponent"] = rep.target_exponent;
            summary["within_tolerance"] =
                std::abs(rep.fitted_slope - rep.target_exponent) <= 0.03;
        } else if (a.check == "two_term") {
            if (!cfg.has_model) throw ConfigError("asym two_term: needs a model section");
            ensure_oracle();
            cx v_int{0, 0};
            for (const auto& p : cfg.pert.potentials) v_int += p.integral(HUGE_VAL);
            std::string out = csv_header(cfg.config_hash);
            out += "n,re_oracle,im_oracle,re_prediction,im_prediction,abs_err\n";
            const int hi = std::min(cfg.M / 2, a.n_hi);
            for (int n = a.n_lo; n <= hi; ++n) {
                const cx pred = two_term_prediction(cfg.model.beta(), n, v_int);
                const cx orc = oracle->values[n]; // level n = position n+1
                out += std::to_string(n) + "," + format_num(orc.real()) + "," +
                       format_num(orc.imag()) + "," + format_num(pred.real()) + "," +
                       format_num(pred.imag()) + "," + format_num(std::abs(orc - pred)) + "\n";
            }
            write_atomic((fs::path(cfg.out_dir) / "two_term.csv").string(), out);
        } else {
            throw ConfigError("asym: unknown check \"" + a.check + "\"");
        }
        write_atomic((fs::path(cfg.out_dir) / "asym_summary.json").string(),
                     summary.dump(2) + "\n");
    }

    void run(const std::string& name) {
        try {
            if (name == "spectrum")
                stage_spectrum();
            else if (name == "formmatrix")
                stage_formmatrix();
            else if (name == "enclose")
                stage_enclose();
            else if (name == "correct")
                stage_correct();
            else if (name == "diagnose")
                stage_diagnose();
            else if (name == "asym")
                stage_asym();
            else
                throw ConfigError("unknown stage \"" + name + "\"");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw std::runtime_error("stage " + name + ": " + e.what());
        }
    }
};

} // namespace

void run_scenario(ScenarioConfig& cfg, const std::vector<std::string>& stages, Exec exec) {
    fs::create_directories(cfg.out_dir);
    Pipeline pipe{cfg, exec, {}, {}, {}, {}, {}, {}};
    std::vector<std::string> todo = stages.empty() ? cfg.stages : stages;
    if (todo.empty()) throw ConfigError("no stages requested");
    // dependency order regardless of listing order
    std::stable_sort(todo.begin(), todo.end(), [](const std::string& x, const std::string& y) {
        const auto pos = [](const std::string& s) {
            return std::find(kStageOrder.begin(), kStageOrder.end(), s) - kStageOrder.begin();
        };
        return pos(x) < pos(y);
    });
    for (const std::string& s : todo) pipe.run(s);
}

void write_counterexample(const CounterexampleBlocks& blocks, const std::string& out_dir,
                          std::uint64_t config_hash) {
    fs::create_directories(out_dir);
    std::string out = csv_header(config_hash);
    out += "k,t,closed_lo,closed_hi,oracle_lo,oracle_hi,closed_proj,oracle_proj_lo,"
           "oracle_proj_hi\n";
    for (int k = 1; k <= blocks.blocks; ++k) {
        out += std::to_string(k) + "," + format_num(blocks.t[k - 1]) + "," +
               format_num(blocks.closed_values[2 * k - 2].real()) + "," +
               format_num(blocks.closed_values[2 * k - 1].real()) + "," +
               format_num(blocks.oracle_values[2 * k - 2].real()) + "," +
               format_num(blocks.oracle_values[2 * k - 1].real()) + "," +
               format_num(blocks.closed_proj[2 * k - 2]) + "," +
               format_num(blocks.oracle_proj[2 * k - 2]) + "," +
               format_num(blocks.oracle_proj[2 * k - 1]) + "\n";
    }
    write_atomic((fs::path(out_dir) / "counterexample.csv").string(), out);
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("plotdata: missing report " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

void emit_plotdata(const std::string& out_dir, const std::string& kind,
                   std::uint64_t config_hash) {
    const fs::path dir(out_dir);
    std::string out = csv_header(config_hash);
    if (kind == "enclosure") {
        std::ifstream in((dir / "enclosure.json").string());
        if (!in) throw std::runtime_error("plotdata: missing enclosure.json");
        json rep = json::parse(in);
        for (const auto& b : rep.at("boxes")) {
            const double lo = b.at("re_lo"), hi = b.at("re_hi"), im = b.at("im_half");
            out += format_num(lo) + " " + format_num(-im) + "\n";
            out += format_num(hi) + " " + format_num(-im) + "\n";
            out += format_num(hi) + " " + format_num(im) + "\n";
            out += format_num(lo) + " " + format_num(im) + "\n";
            out += format_num(lo) + " " + format_num(-im) + "\n\n";
        }
    } else if (kind == "residuals") {
        const auto lines = read_lines((dir / "corrections.csv").string());
        for (std::size_t i = 2; i < lines.size(); ++i) {
            const auto f = split_csv(lines[i]);
            const double n = std::stod(f[0]);
            const double r2 = std::stod(f[9]);
            if (r2 > 0) out += format_num(std::log(n)) + " " + format_num(std::log(r2)) + "\n";
        }
    } else if (kind == "projnorms") {
        const auto lines = read_lines((dir / "corrections.csv").string());
        for (std::size_t i = 2; i < lines.size(); ++i) {
            const auto f = split_csv(lines[i]);
            out += f[0] + " " + f[10] + "\n";
        }
    } else if (kind == "lambda1") {
        const auto lines = read_lines((dir / "lambda1_asym.csv").string());
        if (lines.size() > 2) out += "# target = " + split_csv(lines[2])[2] + "\n";
        for (std::size_t i = 2; i < lines.size(); ++i) {
            const auto f = split_csv(lines[i]);
            out += f[0] + " " + f[1] + "\n";
        }
    } else {
        throw ConfigError("plotdata: unknown kind \"" + kind + "\"");
    }
    write_atomic((dir / ("plot_" + kind + ".dat")).string(), out);
}

} // namespace riesz
