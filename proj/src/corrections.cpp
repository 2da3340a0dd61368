#include "riesz/corrections.hpp"

#include <algorithm>
#include <cmath>

namespace riesz {

cx lambda1(const FormMatrix& fm, int n) {
    if (n < 1 || n > fm.M) throw std::out_of_range("lambda1: position outside the form matrix");
    return fm.at(n, n);
}

Lambda2 lambda2(const FormMatrix& fm, const std::vector<double>& mu, int n,
                const GapParams* gaps, double alpha, double mb) {
    if (n < 1 || n > fm.M) throw std::out_of_range("lambda2: position outside the form matrix");
    if (static_cast<int>(mu.size()) < fm.M)
        throw std::invalid_argument("lambda2: mu shorter than the form matrix");
    const double mu_n = mu[n - 1];
    cx sum{0, 0};
    for (int j = 1; j <= fm.M; ++j) {
        if (j == n) continue;
        const double den = mu_n - mu[j - 1];
        if (std::abs(den) <= 1e-12 * std::max(1.0, std::abs(mu_n)))
            throw std::domain_error("lambda2: degenerate gap between mu_n and mu_j");
        sum += fm.at(n, j) * fm.at(j, n) / den;
    }
    Lambda2 out{sum, 0.0};
    if (gaps && mb > 0 && fm.M > n) {
        // |b(n,j) b(j,n)| <= Mb^2 / (n^{2a} j^{2a}); gap lower bound handles mu_j - mu_n
        const double pref = mb * mb * std::pow(static_cast<double>(n), -2.0 * alpha);
        out.tail_bound =
            pref * decay_sum_tail(2.0 * alpha, *gaps, fm.M, mu[fm.M - 1], mu_n);
    }
    return out;
}

Phi1 phi1(const FormMatrix& fm, const std::vector<double>& mu, int n) {
    if (n < 1 || n > fm.M) throw std::out_of_range("phi1: position outside the form matrix");
    const double mu_n = mu[n - 1];
    Phi1 out;
    double norm2 = 0;
    for (int j = 1; j <= fm.M; ++j) {
        if (j == n) continue;
        const cx num = fm.at(n, j);
        if (num == cx{0, 0}) continue;
        const double den = mu_n - mu[j - 1];
        if (std::abs(den) <= 1e-12 * std::max(1.0, std::abs(mu_n)))
            throw std::domain_error("phi1: degenerate gap between mu_n and mu_j");
        const cx c = num / den;
        out.index.push_back(j);
        out.coeff.push_back(c);
        norm2 += std::norm(c);
    }
    out.norm = std::sqrt(norm2);
    return out;
}

double remainder_scale(double alpha, double gamma, int n, int j) {
    if (j < 1) throw std::invalid_argument("remainder_scale: order j must be >= 1");
    const double s = sigma_n(2.0 * alpha, gamma, n);
    return std::pow(s, j + 1.0) / std::pow(static_cast<double>(n), 2.0 * alpha);
}

GalerkinResult galerkin_spectrum(const Model& model, const FormMatrix& fm,
                                 const EnclosureLayout* layout, int dense_limit) {
    const int M = fm.M;
    if (M > dense_limit)
        throw std::invalid_argument("galerkin_spectrum: truncation exceeds the dense limit");
    CMatrix A(M);
    for (int m = 1; m <= M; ++m) {
        for (int n = 1; n <= M; ++n) A(m - 1, n - 1) = fm.at(m, n);
        A(m - 1, m - 1) += model.mu(m);
    }
    EigenSystem sys = dense_eigensystem(A);

    GalerkinResult out;
    out.values.resize(M);
    out.right.resize(M);
    out.left.resize(M);

    // pairing: eigenvalues arrive sorted by real part; with a layout, indices
    // beyond N go to the nearest box center (ties by smaller |Im|), everything
    // else keeps rank order
    std::vector<int> assign(M);
    for (int i = 0; i < M; ++i) assign[i] = i;
    if (layout) {
        std::vector<int> taken(M + 1, -1);
        std::vector<bool> used(M, false);
        for (int k = layout->N + 1; k <= std::min(layout->k_hi, M); ++k) {
            const Box b = layout->box(k);
            const cx center{0.5 * (b.re_lo + b.re_hi), 0.0};
            int best = -1;
            double best_d = HUGE_VAL;
            double best_im = HUGE_VAL;
            for (int i = 0; i < M; ++i) {
                if (used[i]) continue;
                const double d = std::abs(sys.values[i] - center);
                const double im = std::abs(sys.values[i].imag());
                if (d < best_d - 1e-15 * std::max(1.0, best_d) ||
                    (d <= best_d * (1.0 + 1e-15) && im < best_im)) {
                    best = i;
                    best_d = d;
                    best_im = im;
                }
            }
            if (best >= 0 && layout->box(k).contains(sys.values[best])) {
                taken[k] = best;
                used[best] = true;
            }
        }
        // remaining positions take the remaining eigenvalues in rank order
        std::vector<int> rest;
        for (int i = 0; i < M; ++i)
            if (!used[i]) rest.push_back(i);
        std::size_t next = 0;
        for (int pos = 1; pos <= M; ++pos) {
            if (pos > layout->N && pos <= layout->k_hi && taken[pos] >= 0)
                assign[pos - 1] = taken[pos];
            else
                assign[pos - 1] = rest[next++];
        }
    }
    for (int pos = 0; pos < M; ++pos) {
        const int i = assign[pos];
        out.values[pos] = sys.values[i];
        out.right[pos] = std::move(sys.right[i]);
        out.left[pos] = std::move(sys.left[i]);
    }
    return out;
}

std::vector<CorrectionRecord> correction_report(const Model& model, const FormMatrix& fm,
                                                const GalerkinResult& oracle, int n_lo, int n_hi,
                                                const GapParams* gaps, double alpha, double mb,
                                                Exec exec) {
    n_lo = std::max(1, n_lo);
    n_hi = std::min(n_hi, fm.M);
    if (n_hi < n_lo) return {};
    const std::vector<double> mu = model.mu_vector(fm.M);
    std::vector<CorrectionRecord> recs(n_hi - n_lo + 1);
    par_for(n_hi - n_lo + 1, [&](long i) {
        const int n = n_lo + static_cast<int>(i);
        CorrectionRecord r;
        r.n = n;
        r.mu_n = mu[n - 1];
        r.l1 = lambda1(fm, n);
        const Lambda2 l2 = lambda2(fm, mu, n, gaps, alpha, mb);
        r.l2 = l2.value;
        r.l2_tail = l2.tail_bound;
        r.phi1 = phi1(fm, mu, n);
        r.oracle = oracle.values[n - 1];
        r.residual1 = std::abs(r.oracle - r.mu_n - r.l1);
        r.residual2 = std::abs(r.oracle - r.mu_n - r.l1 - r.l2);
        r.proj_norm = projection_norm(oracle.right[n - 1], oracle.left[n - 1]);
        recs[i] = r;
    }, exec);
    return recs;
}

} // namespace riesz
