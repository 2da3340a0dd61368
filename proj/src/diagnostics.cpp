#include "riesz/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace riesz {

RieszReport riesz_report(const std::vector<CorrectionRecord>& records, double alpha,
                         double gamma) {
    RieszReport rep;
    rep.admissible = 2.0 * alpha + gamma > 1.0;
    rep.bari_predicate = (alpha <= 0.5) ? (2.0 * alpha + gamma > 1.5) : (gamma > 0.5);
    if (records.empty()) return rep;

    std::vector<double> ns, projs;
    double partial = 0, upper = 0;
    const std::size_t half = records.size() / 2;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        rep.sup_proj_norm = std::max(rep.sup_proj_norm, r.proj_norm);
        ns.push_back(static_cast<double>(r.n));
        projs.push_back(r.proj_norm);
        const double inc = r.phi1.norm * r.phi1.norm;
        partial += inc;
        if (i >= half) upper += inc;
    }
    rep.bari_partial = partial;
    rep.bari_tail_fraction = partial > 0 ? upper / partial : 0.0;
    if (records.size() >= 4) rep.proj_slope = log_slope_upper_half(ns, projs);
    return rep;
}

CounterexampleBlocks counterexample_blocks(double gamma, const std::vector<double>& t, int K) {
    if (K < 1 || static_cast<int>(t.size()) < K)
        throw std::invalid_argument("counterexample_blocks: need t_k for every block");
    if (!(gamma > 0)) throw std::invalid_argument("counterexample_blocks: gamma must be positive");
    CounterexampleBlocks out;
    out.gamma = gamma;
    out.blocks = K;
    out.t.assign(t.begin(), t.begin() + K);

    const int M = 2 * K;
    out.mu.resize(M);
    for (int k = 1; k <= M; ++k) out.mu[k - 1] = std::pow(k, gamma);

    CMatrix A(M);
    out.closed_values.resize(M);
    out.closed_proj.resize(M);
    for (int k = 1; k <= K; ++k) {
        const double tk = out.t[k - 1];
        if (!(tk >= 0 && tk < 1))
            throw std::invalid_argument("counterexample_blocks: t_k must lie in [0,1)");
        const double mu_lo = out.mu[2 * k - 2];
        const double mu_hi = out.mu[2 * k - 1];
        const double d = 0.5 * (mu_hi - mu_lo);
        const double tau = std::sqrt(1.0 - tk * tk);
        A(2 * k - 2, 2 * k - 2) = mu_lo;
        A(2 * k - 1, 2 * k - 1) = mu_hi;
        A(2 * k - 2, 2 * k - 1) = d * tk;  // B e_{2k} = d t e_{2k-1}
        A(2 * k - 1, 2 * k - 2) = -d * tk; // B e_{2k-1} = -d t e_{2k}
        out.closed_values[2 * k - 2] = mu_lo + d - d * tau;
        out.closed_values[2 * k - 1] = mu_lo + d + d * tau;
        out.closed_proj[2 * k - 2] = 1.0 / (1.0 - tk * tk);
        out.closed_proj[2 * k - 1] = 1.0 / (1.0 - tk * tk);
    }

    EigenSystem sys = dense_eigensystem(A);
    out.oracle_values = sys.values; // sorted by Re; closed list is ordered the same way
    out.oracle_proj.resize(M);
    for (int i = 0; i < M; ++i)
        out.oracle_proj[i] = projection_norm(sys.right[i], sys.left[i]);

    for (int i = 0; i < M; ++i) {
        out.max_value_err = std::max(out.max_value_err,
                                     std::abs(out.oracle_values[i] - out.closed_values[i]));
        out.max_proj_err =
            std::max(out.max_proj_err, std::abs(out.oracle_proj[i] - out.closed_proj[i]));
    }
    if (K >= 4) {
        std::vector<double> ks(K), pr(K);
        for (int k = 1; k <= K; ++k) {
            ks[k - 1] = k;
            pr[k - 1] = out.oracle_proj[2 * k - 1];
        }
        out.proj_slope = log_slope_upper_half(ks, pr);
    }
    return out;
}

SchurSums schur_row_sums(const std::vector<double>& mu, const GapParams& gaps, double alpha,
                         int range) {
    const int L = static_cast<int>(mu.size());
    if (L < 2 * range)
        throw std::invalid_argument("schur_row_sums: need mu up to twice the range");

    const auto z_pick = [&](int n) {
        return mu[n - 1] + 0.5 * gaps.kappa * std::pow(static_cast<double>(n), gaps.gamma - 1.0);
    };
    const auto compute = [&](int R, std::vector<double>& row, std::vector<double>& col) {
        row.assign(R, 0.0);
        col.assign(R, 0.0);
        for (int n = 1; n <= R; ++n) {
            const double zn = z_pick(n);
            double s = 0;
            for (int m = 1; m <= 2 * R; ++m)
                s += std::pow(static_cast<double>(m), -2.0 * alpha) / std::abs(zn - mu[m - 1]);
            row[n - 1] = s;
            for (int m = 1; m <= R; ++m)
                col[m - 1] +=
                    std::pow(static_cast<double>(n), -2.0 * alpha) / std::abs(zn - mu[m - 1]);
        }
    };

    SchurSums out;
    std::vector<double> row_half, col_half;
    compute(std::max(1, range / 2), row_half, col_half);
    compute(range, out.row, out.col);
    const auto vmax = [](const std::vector<double>& v) {
        double m = 0;
        for (double x : v) m = std::max(m, x);
        return m;
    };
    out.max_row = vmax(out.row);
    out.max_col = vmax(out.col);
    out.row_bounded = out.max_row <= vmax(row_half) * 1.01;
    out.col_bounded = out.max_col <= vmax(col_half) * 1.01;
    return out;
}

} // namespace riesz
