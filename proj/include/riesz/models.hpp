#pragma once

#include "riesz/numerics.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace riesz {

// ---------------------------------------------------------------------------
// Single-well potentials and WKB machinery
// ---------------------------------------------------------------------------

/// Even single-well potential: Q(0)=0, increasing on (0,inf). Power-law wells
/// carry the exponent so turning points invert exactly.
struct Well {
    std::function<double(double)> Q;
    std::function<double(double)> dQ;
    std::optional<double> beta; // set when Q = |x|^beta
};

Well power_well(double beta);

struct TurningPoint {
    double x_mu;
    double a_mu; // Q'(x_mu)
};

/// Positive solution of Q(x)=mu. Exact inversion for power wells, otherwise
/// geometric bracket growth + bisection.
TurningPoint turning_point(const Well& w, double mu, double rel_tol = 1e-12);

struct Phase {
    double value;   // phase magnitude (>= 0)
    bool forbidden; // true when x > x_mu
};

/// Phase integral between x >= 0 and the turning point, with the square-root
/// endpoint singularity removed by substitution.
Phase phase_zeta(const Well& w, double mu, double x, double tol = 1e-10);

struct OmegaPair {
    double omega;
    double omega_prime;
};

/// (2 int_0^1 (1-t^b)^{1/2} dt, 2 int_0^1 (1-t^b)^{-1/2} dt); beta=+inf -> (2,2).
OmegaPair omega_constants(double beta, double tol = 1e-12);

/// Bohr-Sommerfeld eigenvalue of level k >= 0 for Q=|x|^beta:
/// mu = ((k+1/2) pi / Omega_beta)^{2beta/(beta+2)}.
double bs_eigenvalue(double beta, int k);

/// Same by root-finding the phase-integral condition directly (general wells).
double bs_eigenvalue_general(const Well& w, int k, double tol = 1e-10);

struct WkbState {
    double mu = 0;
    double x_mu = 0;
    double a_mu = 0;
    double delta = 0;     // zeta(x_mu - delta) = 1
    double delta1 = 0;    // eta(x_mu + delta1) = 1
    double u_norm_sq = 0; // full-line ||u||^2 (numerical)
    double x_cut = 0;     // |x| beyond which the eigenfunction is negligible
    bool low_index = false;
};

WkbState make_wkb_state(const Well& w, double mu, bool low_index = false);

/// Unnormalized u(x,mu), x >= 0, in the uniform Airy (Langer) form.
double wkb_u(const Well& w, const WkbState& st, double x);

/// Normalized WKB eigenfunction of level k; odd levels get odd reflection.
double wkb_psi(const Well& w, const WkbState& st, int k, double x);

struct UNorm {
    double quadrature; // 2 int_0^{x_mu} pi (mu-Q)^{-1/2} dx
    double asymptotic; // pi Omega' mu^{(2-beta)/(2beta)}
};

UNorm u_norm_main_term(const Well& w, const WkbState& st, double beta, double tol = 1e-10);

/// Orthonormal Hermite function by the stable three-term recurrence.
double hermite_psi(int k, double x);

struct EigenPair {
    double mu;
    double psi;
};

/// Neumann-interval eigenpair of level k >= 0 at x in [-l,l].
EigenPair neumann_eigenpair(double l, int k, double x);

// ---------------------------------------------------------------------------
// Sequence tools
// ---------------------------------------------------------------------------

/// sigma_{omega,gamma}(n) = n^{1-omega-gamma} log(e n) for omega <= 1, else n^{-gamma}.
/// Requires omega + gamma > 1.
double sigma_n(double omega, double gamma, int n);

struct GapFit {
    double kappa = 0;
    int n0 = 0;
    bool ok = false;
};

/// Largest kappa and smallest N0 such that mu_{k+1}-mu_k >= kappa k^{gamma-1}
/// holds for every N0 < k < len(mu); mu is position-indexed (mu[0] = mu_1).
GapFit fit_gap_params(const std::vector<double>& mu, double gamma);

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

enum class ModelKind { NeumannInterval, SingleWell, HarmonicExact, DiagonalSequence };

struct GapParams {
    double gamma = 0;
    double kappa = 0;
    int n0 = 1;
};

/// An unperturbed self-adjoint model. Eigenvalues and eigenfunctions are
/// addressed by basis position n >= 1 (level n-1 for the continuum kinds).
class Model {
public:
    static Model neumann(double l);
    static Model single_well(double beta, int low_index_threshold = 10);
    static Model harmonic();
    static Model diagonal(std::vector<double> mu, double gamma);
    /// Diagonal model with mu_k = k^gamma for every k.
    static Model power_sequence(double gamma);

    ModelKind kind() const { return kind_; }
    double length() const { return l_; }
    double beta() const { return beta_; }
    const GapParams& gaps() const { return gaps_; }
    void set_gaps(const GapParams& g) { gaps_ = g; }

    double mu(int n) const;
    std::vector<double> mu_vector(int count) const;
    /// Reference law used for the ratio_to_asymptotic column.
    double mu_asym(int n) const;

    /// Precomputes per-level WKB data; required before psi() on single wells.
    void prepare(int max_position);
    double psi(int n, double x) const;
    bool has_eigenfunctions() const { return kind_ != ModelKind::DiagonalSequence; }
    /// +1 / -1 parity of the eigenfunction at position n; 0 when meaningless.
    int parity(int n) const;
    bool symmetric() const { return kind_ != ModelKind::DiagonalSequence; }
    /// Interval half-width, or the |x| truncation where eigenfunction n decays
    /// below ~1e-14 of scale (line models).
    double support_cut(int n) const;
    /// True when the WKB error factor makes position n unreliable.
    bool low_index_flag(int n) const;

    const Well& well() const { return well_; }

private:
    Model() = default;
    double bs_level(int n) const;

    ModelKind kind_ = ModelKind::DiagonalSequence;
    double l_ = 0;
    double beta_ = 0;
    double omega_ = 0; // Omega_beta, fixed at construction for single wells
    int low_index_threshold_ = 10;
    std::vector<double> diag_mu_;
    double power_gamma_ = 0; // > 0 when mu_k = k^gamma generates the sequence
    GapParams gaps_;
    Well well_;
    std::vector<WkbState> states_; // per-level WKB data (single well)
    int prepared_ = 0;
};

} // namespace riesz
