#pragma once

#include "riesz/perturbations.hpp"

#include <vector>

namespace riesz {

struct FitPoint {
    double k = 0;
    double observed = 0;
    double target = 0;
    double ratio = 0;
};

struct FitReport {
    std::vector<FitPoint> points;
    double fitted_slope = 0;    // log-log, upper half of the range
    double target_exponent = 0; // when the check is a slope comparison
    double terminal_ratio = 0;  // observed/target at the top of the range
    double drift = 0;           // terminal ratio minus the mid-range ratio
};

struct MuGapReport {
    FitReport mu;
    FitReport gap;
};

/// Eigenvalue and gap laws of the power well over Bohr-Sommerfeld levels:
/// mu_k vs (pi k / Omega)^gamma and gaps vs (2 pi/Omega') (pi k/Omega)^{gamma-1}.
MuGapReport check_mu_and_gaps(double beta, int k_lo, int k_hi);

/// First-correction law for integrable decaying potentials: observed diagonal
/// corrections against (1/Omega') (pi n/Omega)^{-2/(beta+2)} int V (or
/// (1/2l) int V for the Neumann interval). `model` must expose eigenfunctions;
/// levels are sampled over [n_lo, n_hi].
FitReport check_lambda1_asym(Model& model, const PerturbationSpec& pert, int n_lo, int n_hi,
                             int n_count = 40, double tol = 1e-10);

/// Two-term eigenvalue prediction for Q=|x|^beta plus an integrable V:
/// (pi (n+1/2)/Omega)^{2 beta/(beta+2)} + (1/Omega') (pi n/Omega)^{-2/(beta+2)} int V.
cx two_term_prediction(double beta, int n, cx v_integral);

/// Weighted L^q norm law ||w psi_k||_q with w=(1+x^2)^{tau/2}: fitted log-log
/// slope against the three-branch exponent plus the weight contribution
/// 2 tau/(beta+2). Pass q = infinity for the sup norm. The q=4 log factor is
/// divided out before fitting.
FitReport check_lq_norms(Model& model, double q, double tau, int k_lo, int k_hi,
                         int k_count = 40);

/// The exponent table alone (weight included).
double lq_target_exponent(double beta, double q, double tau);

} // namespace riesz
