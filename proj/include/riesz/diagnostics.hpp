#pragma once

#include "riesz/corrections.hpp"

#include <vector>

namespace riesz {

struct RieszReport {
    double sup_proj_norm = 1;
    double proj_slope = 0;       // fitted slope of log proj_norm vs log n
    double bari_partial = 0;     // sum ||phi_n^{(1)}||^2 over the records
    double bari_tail_fraction = 0; // share of the partial sum from the upper half
    bool bari_predicate = false;
    bool admissible = false;
};

/// Projection-norm and Bari-sum diagnostics over a contiguous record range.
RieszReport riesz_report(const std::vector<CorrectionRecord>& records, double alpha,
                         double gamma);

struct CounterexampleBlocks {
    double gamma = 0;
    int blocks = 0;
    std::vector<double> t;
    std::vector<double> mu;          // positions 1..2K
    std::vector<cx> closed_values;   // per position
    std::vector<double> closed_proj; // per position
    std::vector<cx> oracle_values;
    std::vector<double> oracle_proj;
    double max_value_err = 0;
    double max_proj_err = 0;
    double proj_slope = 0; // fitted growth of log proj norm vs log block index
};

/// 2x2-block perturbation of mu_k = k^gamma with closed-form eigenvalues
/// mu_{2k-1} + d_k (1 +- sqrt(1-t_k^2)) and projection norms 1/(1-t_k^2),
/// cross-checked against the dense oracle.
CounterexampleBlocks counterexample_blocks(double gamma, const std::vector<double>& t, int K);

struct SchurSums {
    double max_row = 0;
    double max_col = 0;
    bool row_bounded = false; // two-point certificate: max did not grow when
    bool col_bounded = false; // the range doubled from range/2 to range
    std::vector<double> row;  // n -> weighted row sum
    std::vector<double> col;  // m -> weighted column sum
};

/// Weighted Schur sums of the matrix 1/(m^alpha n^alpha |z_n - mu_m|) with
/// weight m^{-alpha}, z_n the right-edge midpoint of box n.
SchurSums schur_row_sums(const std::vector<double>& mu, const GapParams& gaps, double alpha,
                         int range);

} // namespace riesz
