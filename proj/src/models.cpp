#include "riesz/models.hpp"

#include "riesz/airy.hpp"
#include "riesz/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace riesz {

namespace {

constexpr double kTailPhase = 40.0; // e^{-40} ~ 4e-18: eigenfunction negligible

double clamp0(double v) { return v > 0 ? v : 0.0; }

} // namespace

Well power_well(double beta) {
    Well w;
    w.beta = beta;
    w.Q = [beta](double x) { return std::pow(std::abs(x), beta); };
    w.dQ = [beta](double x) { return beta * std::pow(std::abs(x), beta - 1.0); };
    return w;
}

TurningPoint turning_point(const Well& w, double mu, double rel_tol) {
    if (!(mu > 0)) throw std::domain_error("turning_point: mu must be positive");
    if (w.beta) {
        const double b = *w.beta;
        const double x = std::pow(mu, 1.0 / b);
        return {x, b * std::pow(x, b - 1.0)};
    }
    const double x = find_root_increasing([&](double s) { return w.Q(s) - mu; }, 1.0, rel_tol);
    return {x, w.dQ(x)};
}

Phase phase_zeta(const Well& w, double mu, double x, double tol) {
    if (x < 0) throw std::domain_error("phase_zeta: x must be >= 0");
    const double x_mu = turning_point(w, mu).x_mu;
    if (x == x_mu) return {0.0, false};
    if (x < x_mu) {
        // s = x_mu - t^2 removes the sqrt vanishing at the turning point
        const double T = std::sqrt(x_mu - x);
        const double val = integrate(
            [&](double t) { return 2.0 * t * std::sqrt(clamp0(mu - w.Q(x_mu - t * t))); }, 0.0, T,
            tol);
        return {val, false};
    }
    const double T = std::sqrt(x - x_mu);
    const double val = integrate(
        [&](double t) { return 2.0 * t * std::sqrt(clamp0(w.Q(x_mu + t * t) - mu)); }, 0.0, T,
        tol);
    return {val, true};
}

OmegaPair omega_constants(double beta, double tol) {
    if (std::isinf(beta)) return {2.0, 2.0};
    if (!(beta > 0)) throw std::domain_error("omega_constants: beta must be positive");
    // t = 1-s^2; 1-(1-s^2)^beta evaluated via expm1 to keep accuracy near s=0
    const auto one_minus_pow = [beta](double s) {
        return -std::expm1(beta * std::log1p(-s * s));
    };
    const double omega =
        integrate([&](double s) { return 2.0 * s * std::sqrt(one_minus_pow(s)); }, 0.0, 1.0, tol) *
        2.0;
    const double omega_prime =
        integrate([&](double s) { return 2.0 * s / std::sqrt(one_minus_pow(s)); }, 0.0, 1.0, tol) *
        2.0;
    return {omega, omega_prime};
}

double bs_eigenvalue(double beta, int k) {
    if (!(beta > 1)) throw std::domain_error("bs_eigenvalue: beta must exceed 1");
    if (k < 0) throw std::domain_error("bs_eigenvalue: level must be >= 0");
    const double omega = omega_constants(beta).omega;
    const double gamma_pow = 2.0 * beta / (beta + 2.0);
    return std::pow((k + 0.5) * M_PI / omega, gamma_pow);
}

double bs_eigenvalue_general(const Well& w, int k, double tol) {
    const double target = (k + 0.5) * M_PI;
    const double mu0 = w.beta ? bs_eigenvalue(*w.beta, k) : 1.0;
    return find_root_increasing(
        [&](double mu) { return 2.0 * phase_zeta(w, mu, 0.0, tol).value - target; }, mu0, 1e-12);
}

WkbState make_wkb_state(const Well& w, double mu, bool low_index) {
    WkbState st;
    st.mu = mu;
    const TurningPoint tp = turning_point(w, mu);
    st.x_mu = tp.x_mu;
    st.a_mu = tp.a_mu;
    st.low_index = low_index;

    const double zeta0 = phase_zeta(w, mu, 0.0).value;
    if (zeta0 <= 1.0) {
        st.delta = st.x_mu; // shallow level: matching region reaches the origin
    } else {
        st.delta = bisect(
            [&](double d) { return phase_zeta(w, mu, st.x_mu - d).value - 1.0; }, 0.0, st.x_mu);
    }
    {
        double hi = std::max(std::pow(st.a_mu, -1.0 / 3.0), 1e-3);
        while (phase_zeta(w, mu, st.x_mu + hi).value < 1.0) hi *= 2.0;
        st.delta1 =
            bisect([&](double d) { return phase_zeta(w, mu, st.x_mu + d).value - 1.0; }, 0.0, hi);
    }
    {
        double hi = std::max(2.0 * st.delta1, 0.5);
        while (phase_zeta(w, mu, st.x_mu + hi).value < kTailPhase) hi *= 2.0;
        st.x_cut = st.x_mu + bisect([&](double d) {
                       return phase_zeta(w, mu, st.x_mu + d).value - kTailPhase;
                   }, 0.0, hi);
    }

    const auto u2 = [&](double x) {
        const double v = wkb_u(w, st, x);
        return v * v;
    };
    const double osc_width = 0.25 * M_PI / std::sqrt(mu);
    double nrm = 0.0;
    if (st.x_mu - st.delta > 0)
        nrm += integrate_osc(u2, 0.0, st.x_mu - st.delta, osc_width, 1e-8);
    nrm += integrate(u2, std::max(0.0, st.x_mu - st.delta), st.x_mu + st.delta1, 1e-8);
    nrm += integrate(u2, st.x_mu + st.delta1, st.x_cut, 1e-8);
    st.u_norm_sq = 2.0 * nrm;
    return st;
}

double wkb_u(const Well& w, const WkbState& st, double x) {
    if (x < 0) throw std::domain_error("wkb_u: x must be >= 0");
    const double sqrt2pi_amp = std::sqrt(2.0) * M_PI;
    if (std::abs(x - st.x_mu) <= 1e-7 * std::max(1.0, st.x_mu))
        return sqrt2pi_amp * std::pow(st.a_mu, -1.0 / 6.0) * airy_ai(0.0);
    const Phase ph = phase_zeta(w, st.mu, x);
    if (ph.forbidden && ph.value > 200.0) return 0.0;
    const double zmag = std::pow(1.5 * ph.value, 2.0 / 3.0);
    const double qdiff = std::abs(w.Q(x) - st.mu);
    const double pre = std::pow(zmag / qdiff, 0.25);
    return sqrt2pi_amp * pre * airy_ai(ph.forbidden ? zmag : -zmag);
}

double wkb_psi(const Well& w, const WkbState& st, int k, double x) {
    const double ax = std::abs(x);
    double v = wkb_u(w, st, ax) / std::sqrt(st.u_norm_sq);
    if (x < 0 && (k % 2) == 1) v = -v;
    return v;
}

UNorm u_norm_main_term(const Well& w, const WkbState& st, double beta, double tol) {
    // x = x_mu - t^2 removes the inverse-sqrt endpoint
    const double T = std::sqrt(st.x_mu);
    const double quad =
        2.0 * M_PI *
        integrate(
            [&](double t) {
                return 2.0 * t / std::sqrt(std::max(1e-300, st.mu - w.Q(st.x_mu - t * t)));
            },
            0.0, T, tol);
    const double op = omega_constants(beta).omega_prime;
    const double asym = M_PI * op * std::pow(st.mu, (2.0 - beta) / (2.0 * beta));
    return {quad, asym};
}

double hermite_psi(int k, double x) {
    if (k < 0) throw std::domain_error("hermite_psi: level must be >= 0");
    double p0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    if (k == 0) return p0;
    double p1 = std::sqrt(2.0) * x * p0;
    for (int j = 1; j < k; ++j) {
        const double p2 = x * std::sqrt(2.0 / (j + 1.0)) * p1 - std::sqrt(j / (j + 1.0)) * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

EigenPair neumann_eigenpair(double l, int k, double x) {
    if (!(l > 0)) throw std::domain_error("neumann_eigenpair: l must be positive");
    if (k < 0) throw std::domain_error("neumann_eigenpair: level must be >= 0");
    if (x < -l || x > l) throw std::domain_error("neumann_eigenpair: x outside [-l,l]");
    const double root_mu = k * M_PI / (2.0 * l);
    const double mu = root_mu * root_mu;
    const double psi =
        (k == 0) ? 1.0 / std::sqrt(2.0 * l) : std::cos(root_mu * (x + l)) / std::sqrt(l);
    return {mu, psi};
}

double sigma_n(double omega, double gamma, int n) {
    if (!(omega + gamma > 1.0))
        throw std::invalid_argument("sigma_n: requires omega + gamma > 1");
    if (n < 1) throw std::invalid_argument("sigma_n: n must be >= 1");
    if (omega <= 1.0)
        return std::pow(n, 1.0 - omega - gamma) * std::log(M_E * n);
    return std::pow(n, -gamma);
}

GapFit fit_gap_params(const std::vector<double>& mu, double gamma) {
    GapFit fit;
    const int last_gap = static_cast<int>(mu.size()) - 1; // gaps exist for k = 1..last_gap
    if (last_gap < 2) return fit;
    int n0 = 1;
    for (int k = 1; k <= last_gap; ++k)
        if (mu[k] - mu[k - 1] <= 0) n0 = k + 1;
    if (n0 > last_gap / 2) return fit; // no usable monotone range
    double kappa = HUGE_VAL;
    for (int k = n0 + 1; k <= last_gap; ++k)
        kappa = std::min(kappa, (mu[k] - mu[k - 1]) / std::pow(k, gamma - 1.0));
    fit.kappa = kappa;
    fit.n0 = n0;
    fit.ok = kappa > 0;
    return fit;
}

// ---------------------------------------------------------------------------

Model Model::neumann(double l) {
    if (!(l > 0)) throw std::domain_error("Model::neumann: l must be positive");
    Model m;
    m.kind_ = ModelKind::NeumannInterval;
    m.l_ = l;
    // gap ratios (2k-1)/k * (pi/2l)^2 grow in k, so the infimum over k > N0 = 1
    // sits at k = 2
    const double base = M_PI / (2.0 * l);
    m.gaps_ = {2.0, 1.5 * base * base, 1};
    return m;
}

Model Model::single_well(double beta, int low_index_threshold) {
    if (!(beta > 1)) throw std::domain_error("Model::single_well: beta must exceed 1");
    Model m;
    m.kind_ = ModelKind::SingleWell;
    m.beta_ = beta;
    m.omega_ = omega_constants(beta).omega;
    m.low_index_threshold_ = low_index_threshold;
    m.well_ = power_well(beta);
    const double gamma = 2.0 * beta / (beta + 2.0);
    const GapFit fit = fit_gap_params(m.mu_vector(1000), gamma);
    m.gaps_ = {gamma, fit.kappa, std::max(1, fit.n0)};
    return m;
}

Model Model::harmonic() {
    Model m;
    m.kind_ = ModelKind::HarmonicExact;
    m.beta_ = 2.0;
    m.well_ = power_well(2.0);
    m.gaps_ = {1.0, 2.0, 1};
    return m;
}

Model Model::diagonal(std::vector<double> mu, double gamma) {
    if (mu.size() < 4) throw std::domain_error("Model::diagonal: need at least 4 values");
    Model m;
    m.kind_ = ModelKind::DiagonalSequence;
    m.diag_mu_ = std::move(mu);
    const GapFit fit = fit_gap_params(m.diag_mu_, gamma);
    m.gaps_ = {gamma, fit.ok ? fit.kappa : 0.0, std::max(1, fit.n0)};
    return m;
}

Model Model::power_sequence(double gamma) {
    if (!(gamma > 0)) throw std::domain_error("Model::power_sequence: gamma must be positive");
    Model m;
    m.kind_ = ModelKind::DiagonalSequence;
    m.power_gamma_ = gamma;
    std::vector<double> head(1000);
    for (int k = 1; k <= 1000; ++k) head[k - 1] = std::pow(k, gamma);
    const GapFit fit = fit_gap_params(head, gamma);
    m.gaps_ = {gamma, fit.kappa, std::max(1, fit.n0)};
    return m;
}

double Model::mu(int n) const {
    if (n < 1) throw std::out_of_range("Model::mu: position must be >= 1");
    switch (kind_) {
        case ModelKind::NeumannInterval: {
            const double r = (n - 1) * M_PI / (2.0 * l_);
            return r * r;
        }
        case ModelKind::SingleWell:
            return bs_level(n);
        case ModelKind::HarmonicExact:
            return 2.0 * n - 1.0;
        case ModelKind::DiagonalSequence:
            if (n <= static_cast<int>(diag_mu_.size())) return diag_mu_[n - 1];
            if (power_gamma_ > 0) return std::pow(n, power_gamma_);
            throw std::out_of_range("Model::mu: beyond supplied diagonal sequence");
    }
    throw std::logic_error("Model::mu: unreachable");
}

std::vector<double> Model::mu_vector(int count) const {
    std::vector<double> v(count);
    for (int n = 1; n <= count; ++n) v[n - 1] = mu(n);
    return v;
}

double Model::mu_asym(int n) const {
    switch (kind_) {
        case ModelKind::NeumannInterval: {
            const double r = n * M_PI / (2.0 * l_);
            return r * r;
        }
        case ModelKind::SingleWell:
            return std::pow(n * M_PI / omega_, gaps_.gamma);
        case ModelKind::HarmonicExact:
            return 2.0 * n;
        case ModelKind::DiagonalSequence:
            return std::pow(n, gaps_.gamma);
    }
    throw std::logic_error("Model::mu_asym: unreachable");
}

void Model::prepare(int max_position) {
    if (kind_ != ModelKind::SingleWell || max_position <= prepared_) {
        prepared_ = std::max(prepared_, max_position);
        return;
    }
    states_.resize(max_position);
    par_for(max_position, [&](long i) {
        const int level = static_cast<int>(i);
        states_[i] = make_wkb_state(well_, mu(level + 1), level < low_index_threshold_);
    });
    prepared_ = max_position;
}

double Model::psi(int n, double x) const {
    switch (kind_) {
        case ModelKind::NeumannInterval:
            return neumann_eigenpair(l_, n - 1, x).psi;
        case ModelKind::HarmonicExact:
            return hermite_psi(n - 1, x);
        case ModelKind::SingleWell:
            if (n > prepared_)
                throw std::logic_error("Model::psi: call prepare() up to this position first");
            return wkb_psi(well_, states_[n - 1], n - 1, x);
        case ModelKind::DiagonalSequence:
            throw std::logic_error("Model::psi: diagonal models have no eigenfunctions");
    }
    throw std::logic_error("Model::psi: unreachable");
}

int Model::parity(int n) const {
    if (kind_ == ModelKind::DiagonalSequence) return 0;
    return (n - 1) % 2 == 0 ? +1 : -1;
}

double Model::support_cut(int n) const {
    switch (kind_) {
        case ModelKind::NeumannInterval:
            return l_;
        case ModelKind::SingleWell:
            if (n <= prepared_) return states_[n - 1].x_cut;
            [[fallthrough]];
        case ModelKind::HarmonicExact: {
            const double m = mu(n);
            const double x_mu = turning_point(well_, m).x_mu;
            double hi = std::max(1.0, 0.5 * x_mu);
            while (phase_zeta(well_, m, x_mu + hi).value < kTailPhase) hi *= 2.0;
            return x_mu + bisect([&](double d) {
                       return phase_zeta(well_, m, x_mu + d).value - kTailPhase;
                   }, 0.0, hi, 1e-6);
        }
        case ModelKind::DiagonalSequence:
            throw std::logic_error("Model::support_cut: diagonal models have no eigenfunctions");
    }
    throw std::logic_error("Model::support_cut: unreachable");
}

bool Model::low_index_flag(int n) const {
    return kind_ == ModelKind::SingleWell && (n - 1) < low_index_threshold_;
}

double Model::bs_level(int n) const {
    const double gamma_pow = 2.0 * beta_ / (beta_ + 2.0);
    return std::pow((n - 0.5) * M_PI / omega_, gamma_pow);
}

} // namespace riesz
