#pragma once

#include "riesz/dense_eig.hpp"
#include "riesz/localization.hpp"
#include "riesz/perturbations.hpp"

#include <optional>
#include <vector>

namespace riesz {

/// First- and second-order eigenvalue corrections from the form matrix.
cx lambda1(const FormMatrix& fm, int n);

struct Lambda2 {
    cx value;
    double tail_bound; // certified bound on the part truncated beyond fm.M
};

/// sum_{j != n} b(n,j) b(j,n) / (mu_n - mu_j) over j <= fm.M. The tail bound
/// needs the fitted (alpha, Mb) and gap parameters; pass them when available.
Lambda2 lambda2(const FormMatrix& fm, const std::vector<double>& mu, int n,
                const GapParams* gaps = nullptr, double alpha = 0, double mb = 0);

struct Phi1 {
    std::vector<int> index;   // basis positions j != n with nonzero weight
    std::vector<cx> coeff;    // b(n,j)/(mu_n - mu_j)
    double norm = 0;
};

Phi1 phi1(const FormMatrix& fm, const std::vector<double>& mu, int n);

/// sigma_{2 alpha, gamma}(n)^{j+1} / n^{2 alpha}; trend indicator only.
double remainder_scale(double alpha, double gamma, int n, int j);

/// Finite-section oracle: spectrum of diag(mu) + entries with left/right
/// eigenvectors, eigenvalues paired to basis positions.
struct GalerkinResult {
    std::vector<cx> values;             // values[i] pairs with position i+1
    std::vector<std::vector<cx>> right; // same ordering
    std::vector<std::vector<cx>> left;
};

GalerkinResult galerkin_spectrum(const Model& model, const FormMatrix& fm,
                                 const EnclosureLayout* layout = nullptr,
                                 int dense_limit = 600);

struct CorrectionRecord {
    int n = 0;
    double mu_n = 0;
    cx l1{0, 0};
    cx l2{0, 0};
    double l2_tail = 0;
    Phi1 phi1; // sparse first-order eigenvector coefficients
    cx oracle{0, 0};
    double residual1 = 0;
    double residual2 = 0;
    double proj_norm = 1;
};

std::vector<CorrectionRecord> correction_report(const Model& model, const FormMatrix& fm,
                                                const GalerkinResult& oracle, int n_lo, int n_hi,
                                                const GapParams* gaps = nullptr, double alpha = 0,
                                                double mb = 0, Exec exec = Exec::OpenMP);

} // namespace riesz
