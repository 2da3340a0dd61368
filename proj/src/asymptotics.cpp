#include "riesz/asymptotics.hpp"

#include "riesz/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace riesz {

namespace {

std::vector<int> log_spaced_levels(int lo, int hi, int count) {
    std::vector<int> ks;
    if (lo < 1) lo = 1;
    if (hi < lo) hi = lo;
    const double ratio = std::log(static_cast<double>(hi) / lo);
    int prev = -1;
    for (int i = 0; i < count; ++i) {
        const double f = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
        int k = static_cast<int>(std::lround(lo * std::exp(f * ratio)));
        k = std::clamp(k, lo, hi);
        if (k != prev) ks.push_back(k);
        prev = k;
    }
    return ks;
}

double ratio_at(const std::vector<FitPoint>& pts, std::size_t i) {
    return pts[i].target != 0 ? pts[i].observed / pts[i].target : 0.0;
}

void finish_ratios(FitReport& rep) {
    if (rep.points.empty()) return;
    rep.terminal_ratio = ratio_at(rep.points, rep.points.size() - 1);
    rep.drift = rep.terminal_ratio - ratio_at(rep.points, rep.points.size() / 2);
}

} // namespace

MuGapReport check_mu_and_gaps(double beta, int k_lo, int k_hi) {
    const OmegaPair om = omega_constants(beta);
    const double gamma = 2.0 * beta / (beta + 2.0);
    MuGapReport rep;
    for (int k : log_spaced_levels(k_lo, k_hi, 48)) {
        const double mu = bs_eigenvalue(beta, k);
        const double mu_law = std::pow(M_PI * k / om.omega, gamma);
        rep.mu.points.push_back({static_cast<double>(k), mu, mu_law, mu / mu_law});
        const double gap = bs_eigenvalue(beta, k + 1) - mu;
        const double gap_law =
            (2.0 * M_PI / om.omega_prime) * std::pow(M_PI * k / om.omega, gamma - 1.0);
        rep.gap.points.push_back({static_cast<double>(k), gap, gap_law, gap / gap_law});
    }
    finish_ratios(rep.mu);
    finish_ratios(rep.gap);
    return rep;
}

FitReport check_lambda1_asym(Model& model, const PerturbationSpec& pert, int n_lo, int n_hi,
                             int n_count, double tol) {
    if (!pert.delta_sums.empty() || !pert.robins.empty() || !pert.band_parts.empty())
        throw std::domain_error("check_lambda1_asym: only functional potentials admissible");
    if (pert.potentials.empty())
        throw std::domain_error("check_lambda1_asym: no potential supplied");
    for (const auto& p : pert.potentials)
        if (p.catalog == PotentialPart::Catalog::PowerDecay && !(p.eps > 0))
            throw std::domain_error("check_lambda1_asym: potential decay too slow (eps <= 0)");

    const bool interval = model.kind() == ModelKind::NeumannInterval;
    cx v_int{0, 0};
    double target_const = 0;
    double scale_pow = 0;
    if (interval) {
        const double l = model.length();
        for (const auto& p : pert.potentials) v_int += p.integral(l, tol);
        target_const = v_int.real() / (2.0 * l);
    } else {
        const double beta = model.beta();
        const OmegaPair om = omega_constants(beta);
        for (const auto& p : pert.potentials) v_int += p.integral(HUGE_VAL, tol);
        scale_pow = 2.0 / (beta + 2.0);
        target_const =
            v_int.real() / om.omega_prime * std::pow(M_PI / om.omega, -scale_pow);
    }

    const std::vector<int> levels = log_spaced_levels(n_lo, n_hi, n_count);
    model.prepare(levels.back() + 1);
    std::vector<FitPoint> pts(levels.size());
    par_for(static_cast<long>(levels.size()), [&](long i) {
        const int n = levels[i];
        const cx l1 = form_entry(model, pert, n + 1, n + 1, tol);
        const double scaled =
            interval ? l1.real() : std::pow(static_cast<double>(n), scale_pow) * l1.real();
        pts[i] = {static_cast<double>(n), scaled, target_const,
                  target_const != 0 ? scaled / target_const : 0.0};
    });
    FitReport rep;
    rep.points = std::move(pts);
    finish_ratios(rep);
    return rep;
}

cx two_term_prediction(double beta, int n, cx v_integral) {
    if (!(beta >= 2)) throw std::domain_error("two_term_prediction: needs beta >= 2");
    const OmegaPair om = omega_constants(beta);
    const double lead = std::pow(M_PI * (n + 0.5) / om.omega, 2.0 * beta / (beta + 2.0));
    const double corr = std::pow(M_PI * n / om.omega, -2.0 / (beta + 2.0)) / om.omega_prime;
    return lead + corr * v_integral;
}

double lq_target_exponent(double beta, double q, double tau) {
    double base;
    if (std::isinf(q))
        base = (beta - 4.0) / (6.0 * (beta + 2.0));
    else if (q < 4.0)
        base = (2.0 - q) / (q * (beta + 2.0));
    else if (q == 4.0)
        base = -0.5 / (beta + 2.0);
    else
        base = (4.0 - 4.0 * beta - 4.0 * q + q * beta) / (6.0 * q * (beta + 2.0));
    return base + 2.0 * tau / (beta + 2.0);
}

namespace {

double weighted_lq_norm(const Model& model, int position, double q, double tau) {
    const double mu = model.mu(position);
    const double cut = model.support_cut(position);
    const auto wpsi = [&](double x) {
        return std::pow(1.0 + x * x, 0.5 * tau) * std::abs(model.psi(position, x));
    };
    if (std::isinf(q)) {
        // dense scan with parabolic refinement at the peak
        const double step = 0.25 * M_PI / std::sqrt(mu) / 10.0;
        double best = 0, best_x = 0;
        for (double x = 0; x <= cut; x += step) {
            const double v = wpsi(x);
            if (v > best) {
                best = v;
                best_x = x;
            }
        }
        const double a = wpsi(std::max(0.0, best_x - step)), b = best,
                     c = wpsi(std::min(cut, best_x + step));
        const double den = a - 2 * b + c;
        if (den < 0) {
            const double dx = 0.5 * step * (a - c) / den;
            best = std::max(best, wpsi(std::clamp(best_x + dx, 0.0, cut)));
        }
        return best;
    }
    const double width = 0.25 * M_PI / std::sqrt(mu);
    const double integral = integrate_osc(
        [&](double x) {
            const double v = wpsi(x);
            return q == 1.0 ? v : (q == 2.0 ? v * v : std::pow(v, q));
        },
        0.0, cut, width, 1e-6, 6);
    return std::pow(2.0 * integral, 1.0 / q);
}

} // namespace

FitReport check_lq_norms(Model& model, double q, double tau, int k_lo, int k_hi, int k_count) {
    if (!(q >= 1.0)) throw std::domain_error("check_lq_norms: q must be >= 1 (or infinity)");
    if (!model.has_eigenfunctions())
        throw std::domain_error("check_lq_norms: model has no eigenfunctions");
    const double beta = model.beta();
    const std::vector<int> levels = log_spaced_levels(k_lo, k_hi, k_count);
    model.prepare(levels.back() + 1);

    FitReport rep;
    rep.target_exponent = lq_target_exponent(beta, q, tau);
    std::vector<FitPoint> pts(levels.size());
    par_for(static_cast<long>(levels.size()), [&](long i) {
        const int k = levels[i];
        double v = weighted_lq_norm(model, k + 1, q, tau);
        if (q == 4.0 && k > 1) v /= std::pow(std::log(static_cast<double>(k)), 0.25);
        pts[i] = {static_cast<double>(k), v, 0.0, 0.0};
    });
    rep.points = std::move(pts);
    std::vector<double> ks, vs;
    for (const auto& p : rep.points) {
        ks.push_back(p.k);
        vs.push_back(p.observed);
    }
    rep.fitted_slope = log_slope_upper_half(ks, vs);
    return rep;
}

} // namespace riesz
