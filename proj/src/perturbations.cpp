#include "riesz/perturbations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace riesz {

namespace {

double interp_linear(const std::vector<double>& xs, const std::vector<double>& vs, double x) {
    if (x <= xs.front() || x >= xs.back()) return 0.0;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return vs[i - 1] + t * (vs[i] - vs[i - 1]);
}

} // namespace

double PotentialPart::shape(double x) const {
    if (window && (x < window->first || x > window->second)) return 0.0;
    switch (catalog) {
        case Catalog::Gaussian: {
            const double d = (x - center) / sigma;
            return std::exp(-0.5 * d * d);
        }
        case Catalog::Box:
            return (x >= x1 && x <= x2) ? 1.0 : 0.0;
        case Catalog::PowerDecay:
            return std::pow(1.0 + std::abs(x), -(1.0 + eps));
        case Catalog::Sampled:
            return interp_linear(xs, vs, x);
    }
    return 0.0;
}

std::pair<double, double> PotentialPart::support(double line_cut) const {
    double lo = -line_cut, hi = line_cut;
    switch (catalog) {
        case Catalog::Gaussian:
            // e^{-s^2/2} < 1e-16 beyond 8.6 sigma
            lo = std::max(lo, center - 9.0 * sigma);
            hi = std::min(hi, center + 9.0 * sigma);
            break;
        case Catalog::Box:
            lo = std::max(lo, x1);
            hi = std::min(hi, x2);
            break;
        case Catalog::PowerDecay:
            break; // full line
        case Catalog::Sampled:
            lo = std::max(lo, xs.front());
            hi = std::min(hi, xs.back());
            break;
    }
    if (window) {
        lo = std::max(lo, window->first);
        hi = std::min(hi, window->second);
    }
    if (hi < lo) hi = lo;
    return {lo, hi};
}

bool PotentialPart::is_even() const {
    if (window && (window->first != -window->second)) return false;
    switch (catalog) {
        case Catalog::Gaussian:
            return center == 0.0;
        case Catalog::Box:
            return x1 == -x2;
        case Catalog::PowerDecay:
            return true;
        case Catalog::Sampled:
            return false; // not worth detecting numerically
    }
    return false;
}

cx PotentialPart::integral(double line_cut, double tol) const {
    if (!window) {
        switch (catalog) {
            case Catalog::Gaussian: {
                const double rt2s = std::sqrt(2.0) * sigma;
                const double frac = std::isinf(line_cut)
                                        ? 1.0
                                        : 0.5 * (std::erf((line_cut - center) / rt2s) -
                                                 std::erf((-line_cut - center) / rt2s));
                return amplitude * sigma * std::sqrt(2.0 * M_PI) * frac;
            }
            case Catalog::Box: {
                const double lo = std::max(x1, -line_cut), hi = std::min(x2, line_cut);
                return amplitude * std::max(0.0, hi - lo);
            }
            case Catalog::PowerDecay: {
                if (std::isinf(line_cut)) return amplitude * (2.0 / eps);
                return amplitude * 2.0 * (1.0 - std::pow(1.0 + line_cut, -eps)) / eps;
            }
            case Catalog::Sampled:
                break; // bounded support, quadrature below
        }
    }
    const auto [lo, hi] = support(line_cut);
    if (!(hi > lo)) return {0.0, 0.0};
    if (std::isinf(lo) || std::isinf(hi))
        throw std::domain_error("PotentialPart::integral: unbounded windowed support");
    return amplitude * integrate([this](double x) { return shape(x); }, lo, hi, tol, 32);
}

double DeltaSumPart::nu_l1() const {
    double s = 0;
    for (const auto& p : points) s += std::abs(p.nu);
    return s;
}

bool DeltaSumPart::is_even() const {
    // conservative: exact mirror pairs (or points at the origin)
    for (const auto& p : points) {
        if (p.x == 0.0) continue;
        bool mirrored = false;
        for (const auto& q : points)
            if (q.x == -p.x && q.nu == p.nu) {
                mirrored = true;
                break;
            }
        if (!mirrored) return false;
    }
    return true;
}

double BandPart::max_omega() const {
    double w = 0;
    for (const auto& b : bands) w = std::max(w, b.omega);
    return w;
}

bool PerturbationSpec::is_even() const {
    for (const auto& p : potentials)
        if (!p.is_even()) return false;
    for (const auto& d : delta_sums)
        if (!d.is_even()) return false;
    // Robin couples both endpoint values; band parts have no parity structure.
    return robins.empty() && band_parts.empty();
}

PerturbationSpec PerturbationSpec::scaled(cx c) const {
    PerturbationSpec out = *this;
    for (auto& p : out.potentials) p.amplitude *= c;
    for (auto& d : out.delta_sums)
        for (auto& pt : d.points) pt.nu *= c;
    for (auto& r : out.robins) {
        r.nu_plus *= c;
        r.nu_minus *= c;
    }
    for (auto& b : out.band_parts)
        for (auto& band : b.bands) band.coef *= c;
    return out;
}

FormMatrix FormMatrix::adjoint() const {
    FormMatrix out = *this;
    for (int m = 1; m <= M; ++m)
        for (int n = 1; n <= M; ++n) out.at(m, n) = std::conj(at(n, m));
    return out;
}

namespace {

cx band_entry(const BandPart& part, int m, int n) {
    cx v{0, 0};
    for (const auto& b : part.bands)
        if (n - m == b.offset) v += b.coef * std::pow(static_cast<double>(std::min(m, n)), b.omega);
    return v;
}

double product_panel_width(const Model& model, int m, int n) {
    const double f = std::sqrt(std::max(model.mu(m), 0.0)) + std::sqrt(std::max(model.mu(n), 0.0));
    if (f <= 0) return HUGE_VAL;
    return 0.25 * 2.0 * M_PI / f;
}

cx potential_pair_integral(const Model& model, const PotentialPart& part, int m, int n,
                           double tol) {
    const double cut = model.support_cut(std::max(m, n));
    const auto [lo, hi] = part.support(cut);
    if (hi <= lo) return {0, 0};
    const double width = product_panel_width(model, m, n);
    const double val = integrate_osc(
        [&](double x) { return part.shape(x) * model.psi(m, x) * model.psi(n, x); }, lo, hi,
        std::min(width, (hi - lo)), tol);
    return part.amplitude * val;
}

} // namespace

cx form_entry(const Model& model, const PerturbationSpec& pert, int m, int n, double tol) {
    if (m < 1 || n < 1) throw std::out_of_range("form_entry: positions start at 1");
    cx v{0, 0};
    const bool parity_zero =
        model.symmetric() && (model.parity(m) != model.parity(n));
    for (const auto& p : pert.potentials) {
        if (parity_zero && p.is_even()) continue;
        v += potential_pair_integral(model, p, m, n, tol);
    }
    for (const auto& d : pert.delta_sums)
        for (const auto& pt : d.points) v += pt.nu * model.psi(m, pt.x) * model.psi(n, pt.x);
    for (const auto& r : pert.robins) {
        if (model.kind() != ModelKind::NeumannInterval)
            throw std::domain_error("form_entry: Robin parts require the Neumann interval model");
        const double l = model.length();
        v += r.nu_plus * model.psi(m, l) * model.psi(n, l) -
             r.nu_minus * model.psi(m, -l) * model.psi(n, -l);
    }
    for (const auto& b : pert.band_parts) v += band_entry(b, m, n);
    return v;
}

namespace {

// idx -> (m, n) with 0 <= n <= m over the upper triangle, row-major
inline void triangle_pair(long idx, long& m, long& n) {
    m = static_cast<long>((std::sqrt(8.0 * idx + 1.0) - 1.0) / 2.0);
    while ((m + 1) * (m + 2) / 2 <= idx) ++m;
    while (m * (m + 1) / 2 > idx) --m;
    n = idx - m * (m + 1) / 2;
}

// Upper-triangle sums int V psi_m psi_n for one potential shape at a fixed
// panel count. Nodes are processed in blocks so the eigenfunction table stays
// small; block order is fixed, so results do not depend on the thread count.
std::vector<double> potential_triangle_sums(const Model& model, const PotentialPart& part,
                                            int M, double lo, double hi, int panels,
                                            bool skip_odd, Exec exec) {
    static const double gn[8] = {0.0950125098376374401853193, 0.2816035507792589132304605,
                                 0.4580167776572273863424194, 0.6178762444026437484466718,
                                 0.7554044083550030338951012, 0.8656312023878317438804679,
                                 0.9445750230732325760779884, 0.9894009349916499325961542};
    static const double gw[8] = {0.1894506104550684962853967, 0.1826034150449235888667637,
                                 0.1691565193950025381893121, 0.1495959888165767320815017,
                                 0.1246289712555338720524763, 0.0951585116824927848099251,
                                 0.0622535239386478928628438, 0.0271524594117540948517806};
    const long n_nodes = 16L * panels;
    const double h = (hi - lo) / panels;
    const long n_pairs = static_cast<long>(M) * (M + 1) / 2;
    std::vector<double> acc(n_pairs, 0.0);

    const long block = 2048;
    std::vector<double> vw(block), node(block);
    std::vector<double> tab(block * static_cast<std::size_t>(M));
    for (long start = 0; start < n_nodes; start += block) {
        const long count = std::min(block, n_nodes - start);
        for (long j = 0; j < count; ++j) {
            const long g = start + j;
            const long p = g / 16;
            const int i = static_cast<int>((g % 16) / 2);
            const double c = lo + (p + 0.5) * h;
            const double x = (g % 2 == 0) ? c - 0.5 * h * gn[i] : c + 0.5 * h * gn[i];
            node[j] = x;
            vw[j] = 0.5 * h * gw[i] * part.shape(x);
        }
        par_for(count, [&](long j) {
            for (int q = 1; q <= M; ++q)
                tab[j * static_cast<std::size_t>(M) + (q - 1)] = model.psi(q, node[j]);
        }, exec);
        par_for(n_pairs, [&](long idx) {
            long m, n;
            triangle_pair(idx, m, n);
            if (skip_odd && ((m ^ n) & 1L)) return;
            double s = 0.0;
            for (long j = 0; j < count; ++j)
                s += vw[j] * tab[j * static_cast<std::size_t>(M) + m] *
                     tab[j * static_cast<std::size_t>(M) + n];
            acc[idx] += s;
        }, exec);
    }
    return acc;
}

// Shared-node assembly of all potential contributions with panel doubling.
void assemble_potentials(const Model& model, const PerturbationSpec& pert, FormMatrix& fm,
                         Exec exec, double tol) {
    if (pert.potentials.empty()) return;
    if (!model.has_eigenfunctions())
        throw std::domain_error("form_matrix: potential parts need a model with eigenfunctions");
    const int M = fm.M;
    const double cut = model.support_cut(M);
    const double width = product_panel_width(model, M, M);
    const bool even_model = model.symmetric();

    for (const auto& part : pert.potentials) {
        const auto [lo, hi] = part.support(cut);
        if (hi <= lo) continue;
        int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
        const bool skip_odd = even_model && part.is_even();

        std::vector<double> prev;
        for (int pass = 0;; ++pass) {
            std::vector<double> cur =
                potential_triangle_sums(model, part, M, lo, hi, panels, skip_odd, exec);
            bool converged = false;
            if (!prev.empty()) {
                double maxdiff = 0, scale = 1.0;
                for (std::size_t i = 0; i < cur.size(); ++i) {
                    maxdiff = std::max(maxdiff, std::abs(cur[i] - prev[i]));
                    scale = std::max(scale, std::abs(cur[i]));
                }
                converged = maxdiff <= tol * scale;
            }
            if (converged || pass == 4) {
                if (!converged && pass == 4)
                    throw QuadratureError("form_matrix: potential quadrature did not converge");
                long idx = 0;
                for (int m0 = 0; m0 < M; ++m0)
                    for (int n0 = 0; n0 <= m0; ++n0, ++idx) {
                        const cx val = part.amplitude * cur[idx];
                        fm.at(m0 + 1, n0 + 1) += val;
                        if (n0 != m0) fm.at(n0 + 1, m0 + 1) += val;
                    }
                break;
            }
            prev = std::move(cur);
            panels *= 2;
        }
    }
}

} // namespace

FormMatrix form_matrix(Model& model, const PerturbationSpec& pert, int M, Exec exec, double tol) {
    if (M < 2) throw std::invalid_argument("form_matrix: M must be >= 2");
    model.prepare(M);
    FormMatrix fm;
    fm.M = M;
    fm.gamma = model.gaps().gamma;
    fm.entries.assign(static_cast<std::size_t>(M) * M, cx{0, 0});

    assemble_potentials(model, pert, fm, exec, tol);

    if (!pert.delta_sums.empty()) {
        // eigenfunction values at the interaction points
        std::vector<const DeltaPoint*> pts;
        for (const auto& d : pert.delta_sums)
            for (const auto& p : d.points) pts.push_back(&p);
        std::vector<double> tab(pts.size() * static_cast<std::size_t>(M));
        par_for(static_cast<long>(pts.size()), [&](long i) {
            for (int q = 1; q <= M; ++q)
                tab[i * static_cast<std::size_t>(M) + (q - 1)] = model.psi(q, pts[i]->x);
        }, exec);
        for (int m = 1; m <= M; ++m)
            for (int n = m; n <= M; ++n) {
                cx v{0, 0};
                for (std::size_t i = 0; i < pts.size(); ++i)
                    v += pts[i]->nu * tab[i * static_cast<std::size_t>(M) + (m - 1)] *
                         tab[i * static_cast<std::size_t>(M) + (n - 1)];
                fm.at(m, n) += v;
                if (m != n) fm.at(n, m) += v;
            }
    }

    for (const auto& r : pert.robins) {
        if (model.kind() != ModelKind::NeumannInterval)
            throw std::domain_error("form_matrix: Robin parts require the Neumann interval model");
        const double l = model.length();
        std::vector<double> right(M), left(M);
        for (int q = 1; q <= M; ++q) {
            right[q - 1] = model.psi(q, l);
            left[q - 1] = model.psi(q, -l);
        }
        for (int m = 1; m <= M; ++m)
            for (int n = 1; n <= M; ++n)
                fm.at(m, n) += r.nu_plus * right[m - 1] * right[n - 1] -
                               r.nu_minus * left[m - 1] * left[n - 1];
    }

    for (const auto& b : pert.band_parts)
        for (int m = 1; m <= M; ++m)
            for (int n = 1; n <= M; ++n) fm.at(m, n) += band_entry(b, m, n);

    return fm;
}

AlphaFit fit_alpha(const FormMatrix& fm, double gamma, double noise_floor_rel) {
    double maxabs = 0;
    for (const cx& e : fm.entries) maxabs = std::max(maxabs, std::abs(e));
    const double floor = noise_floor_rel * maxabs;
    std::vector<double> s, y;
    for (int m = 1; m <= fm.M; ++m)
        for (int n = 1; n <= fm.M; ++n) {
            const double a = std::abs(fm.at(m, n));
            if (a > floor && a > 0) {
                s.push_back(std::log(static_cast<double>(m) * n));
                y.push_back(std::log(a));
            }
        }
    if (s.size() < 10)
        throw std::runtime_error("fit_alpha: fewer than 10 entries above the noise floor");

    // envelope of binned maxima in s = log(mn)
    double smin = s[0], smax = s[0];
    for (double v : s) {
        smin = std::min(smin, v);
        smax = std::max(smax, v);
    }
    const int nbins = 12;
    std::vector<double> es, ey;
    if (smax - smin < 1e-9) {
        es = {smin};
        ey = {*std::max_element(y.begin(), y.end())};
    } else {
        std::vector<double> best(nbins, -HUGE_VAL);
        for (std::size_t i = 0; i < s.size(); ++i) {
            int b = static_cast<int>((s[i] - smin) / (smax - smin) * nbins);
            b = std::clamp(b, 0, nbins - 1);
            best[b] = std::max(best[b], y[i]);
        }
        for (int b = 0; b < nbins; ++b)
            if (best[b] > -HUGE_VAL) {
                es.push_back(smin + (b + 0.5) * (smax - smin) / nbins);
                ey.push_back(best[b]);
            }
    }

    AlphaFit fit;
    if (es.size() >= 2) {
        // median of pairwise envelope slopes: insensitive to a single
        // under-populated bin, exact on pure power-law envelopes
        std::vector<double> slopes;
        for (std::size_t i = 0; i < es.size(); ++i)
            for (std::size_t j = i + 1; j < es.size(); ++j)
                if (es[j] - es[i] > 1e-9) slopes.push_back((ey[j] - ey[i]) / (es[j] - es[i]));
        if (!slopes.empty()) {
            std::sort(slopes.begin(), slopes.end());
            const std::size_t h = slopes.size() / 2;
            fit.alpha = -(slopes.size() % 2 ? slopes[h] : 0.5 * (slopes[h - 1] + slopes[h]));
        }
    }
    // Mb is the Chebyshev constant: the bound line touches the worst entry
    double log_mb = -HUGE_VAL;
    for (std::size_t i = 0; i < s.size(); ++i)
        log_mb = std::max(log_mb, y[i] + fit.alpha * s[i]);
    fit.mb = std::exp(log_mb);
    for (std::size_t i = 0; i < es.size(); ++i)
        fit.max_residual = std::max(fit.max_residual, log_mb - (ey[i] + fit.alpha * es[i]));
    fit.used_entries = static_cast<int>(s.size());
    fit.admissible = 2.0 * fit.alpha + gamma > 1.0;
    return fit;
}

double predicted_alpha(double beta, const ClassSpec& spec) {
    if (!(beta > 1)) throw std::domain_error("predicted_alpha: beta must exceed 1");
    switch (spec.cls) {
        case PerturbationClass::LpTau: {
            const double p = spec.p, tau = spec.tau;
            if (p < 1) throw std::domain_error("predicted_alpha: p must be >= 1");
            if (p < 2) {
                if (!(tau < (2.0 / 3.0) * (beta - 1.0) * (1.0 - 1.0 / (2.0 * p))))
                    throw std::domain_error("predicted_alpha: (p,tau) inadmissible for p < 2");
                return ((beta + 2.0) / 6.0 + (1.0 - beta) / (3.0 * p) - tau) / (beta + 2.0);
            }
            if (!(tau < (beta - 2.0) / 2.0 + 1.0 / p))
                throw std::domain_error("predicted_alpha: (p,tau) inadmissible for p >= 2");
            if (p == 2) return (0.5 - tau - spec.eps) / (beta + 2.0);
            return (1.0 / p - tau) / (beta + 2.0);
        }
        case PerturbationClass::DecayL1:
            return 1.0 / (beta + 2.0);
        case PerturbationClass::Singular: {
            const double s = spec.s;
            if (spec.compact) {
                if (!(s >= 0 && s < 0.5))
                    throw std::domain_error("predicted_alpha: compact singular needs 0 <= s < 1/2");
                return (1.0 - beta * s) / (beta + 2.0);
            }
            if (!(s >= 0 && s < (beta - 1.0) / (2.0 * beta)))
                throw std::domain_error(
                    "predicted_alpha: singular needs 0 <= s < (beta-1)/(2 beta)");
            return (1.0 - 2.0 * beta * s) / (2.0 * (beta + 2.0));
        }
        case PerturbationClass::DeltaSum:
            return (4.0 - beta) / (6.0 * (beta + 2.0));
        case PerturbationClass::DeltaFixedPoint:
            return 1.0 / (beta + 2.0);
    }
    throw std::logic_error("predicted_alpha: unreachable");
}

double p_subordination(double alpha, double gamma, double tau) {
    if (!(tau > 0 && tau < 2.0 * alpha + gamma - 1.0))
        throw std::domain_error("p_subordination: tau must lie in (0, 2 alpha + gamma - 1)");
    return std::max(0.0, 1.0 - tau / gamma);
}

void save_form_cache(const FormMatrix& fm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_form_cache: cannot open " + path);
    out.write("RZFM", 4);
    const char version = 1;
    out.write(&version, 1);
    const std::uint32_t m = static_cast<std::uint32_t>(fm.M);
    out.write(reinterpret_cast<const char*>(&m), 4);
    for (const cx& e : fm.entries) {
        const double re = e.real(), im = e.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
    if (!out) throw std::runtime_error("save_form_cache: write failed for " + path);
}

FormMatrix load_form_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_form_cache: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "RZFM", 4) != 0)
        throw std::runtime_error("load_form_cache: bad magic in " + path);
    char version = 0;
    in.read(&version, 1);
    if (version != 1) throw std::runtime_error("load_form_cache: unsupported version");
    std::uint32_t m = 0;
    in.read(reinterpret_cast<char*>(&m), 4);
    FormMatrix fm;
    fm.M = static_cast<int>(m);
    fm.entries.resize(static_cast<std::size_t>(m) * m);
    for (cx& e : fm.entries) {
        double re = 0, im = 0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        e = {re, im};
    }
    if (!in) throw std::runtime_error("load_form_cache: truncated file " + path);
    return fm;
}

} // namespace riesz
