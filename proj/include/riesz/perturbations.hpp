#pragma once

#include "riesz/models.hpp"
#include "riesz/parallel.hpp"

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace riesz {

// ---------------------------------------------------------------------------
// Perturbation parts
// ---------------------------------------------------------------------------

struct PotentialPart {
    enum class Catalog { Gaussian, Box, PowerDecay, Sampled };

    Catalog catalog = Catalog::Gaussian;
    cx amplitude{1.0, 0.0};
    double sigma = 1.0;  // gaussian
    double center = 0.0; // gaussian
    double x1 = -1.0, x2 = 1.0; // box
    double eps = 1.0; // power decay (1+|x|)^{-(1+eps)}
    std::vector<double> xs, vs; // sampled grid, linear interpolation
    std::optional<std::pair<double, double>> window;    // support clip
    std::optional<std::pair<double, double>> decay_tag; // (p, tau)

    /// Real catalog shape, amplitude excluded.
    double shape(double x) const;
    /// Effective support clipped to [-line_cut, line_cut].
    std::pair<double, double> support(double line_cut) const;
    bool is_even() const;
    /// amplitude * integral of the shape over its support.
    cx integral(double line_cut, double tol = 1e-10) const;
};

struct DeltaPoint {
    cx nu;
    double x;
};

struct DeltaSumPart {
    std::vector<DeltaPoint> points;
    double nu_l1() const;
    bool is_even() const;
};

struct RobinPart {
    cx nu_plus{0, 0};
    cx nu_minus{0, 0};
};

/// Finite-band entries b(m,n) = sum over bands with offset n-m of
/// coef * min(m,n)^omega.
struct BandPart {
    struct Band {
        int offset = 0;
        cx coef{1, 0};
        double omega = 0;
    };
    std::vector<Band> bands;
    double max_omega() const;
};

struct PerturbationSpec {
    std::vector<PotentialPart> potentials;
    std::vector<DeltaSumPart> delta_sums;
    std::vector<RobinPart> robins;
    std::vector<BandPart> band_parts;

    bool empty() const {
        return potentials.empty() && delta_sums.empty() && robins.empty() && band_parts.empty();
    }
    bool is_even() const;
    bool symmetric_entries() const { return band_parts.empty(); }
    PerturbationSpec scaled(cx c) const;
};

// ---------------------------------------------------------------------------
// Form matrix
// ---------------------------------------------------------------------------

struct FormMatrix {
    int M = 0;
    std::vector<cx> entries; // row-major, positions 1..M
    double gamma = 0;
    double alpha_fit = 0;
    double mb_fit = 0;
    bool admissible = false;

    cx& at(int m, int n) { return entries[(m - 1) * static_cast<std::size_t>(M) + (n - 1)]; }
    cx at(int m, int n) const { return entries[(m - 1) * static_cast<std::size_t>(M) + (n - 1)]; }
    FormMatrix adjoint() const;
};

/// One entry b(psi_m, psi_n), positions 1 <= m,n. Quadrature panels never
/// exceed a quarter of the fastest product oscillation.
cx form_entry(const Model& model, const PerturbationSpec& pert, int m, int n,
              double tol = 1e-10);

/// Assembles all M^2 entries; data-parallel over independent pairs with
/// symmetric/parity shortcuts where they hold.
FormMatrix form_matrix(Model& model, const PerturbationSpec& pert, int M,
                       Exec exec = Exec::OpenMP, double tol = 1e-10);

struct AlphaFit {
    double alpha = 0;
    double mb = 0;
    double max_residual = 0; // Chebyshev half-width of the log envelope fit
    int used_entries = 0;
    bool admissible = false;
};

/// Uniform-envelope fit of |b(m,n)| <= Mb / (m n)^alpha on entries above the
/// noise floor (relative to the largest entry). Throws when fewer than 10
/// entries survive the floor.
AlphaFit fit_alpha(const FormMatrix& fm, double gamma, double noise_floor_rel = 1e-12);

// ---------------------------------------------------------------------------
// Predicted subordination exponents
// ---------------------------------------------------------------------------

enum class PerturbationClass { LpTau, DecayL1, Singular, DeltaSum, DeltaFixedPoint };

struct ClassSpec {
    PerturbationClass cls = PerturbationClass::DecayL1;
    double p = 1;       // LpTau
    double tau = 0;     // LpTau
    double s = 0;       // Singular
    bool compact = false;
    double eps = 0.01;  // LpTau p=2 margin
};

/// Predicted alpha for the class; throws std::domain_error when the class's
/// admissibility precondition fails.
double predicted_alpha(double beta, const ClassSpec& spec);

/// p = max{0, 1 - tau/gamma}; requires 0 < tau < 2 alpha + gamma - 1.
double p_subordination(double alpha, double gamma, double tau);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Binary cache: magic "RZFM", version byte 1, u32 M, then M*M row-major
/// entries as little-endian float64 (re, im) pairs.
void save_form_cache(const FormMatrix& fm, const std::string& path);
FormMatrix load_form_cache(const std::string& path);

} // namespace riesz
