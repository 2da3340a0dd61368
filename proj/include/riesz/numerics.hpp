#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace riesz {

using cx = std::complex<double>;

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Composite 16-point Gauss-Legendre over [a,b] split into `panels` equal panels.
double gl_panels(const std::function<double(double)>& f, double a, double b, int panels);

/// Panel-doubling quadrature: starts at `panels0`, doubles until two successive
/// estimates agree to `tol` (relative to max(1,|I|)). Throws QuadratureError if
/// the doubling cap is reached without convergence.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int panels0 = 4, int max_doublings = 16);

/// Same but the initial panel count is chosen so no panel is wider than `max_width`.
/// Used for oscillatory integrands where the resolution scale is known a priori.
double integrate_osc(const std::function<double(double)>& f, double a, double b,
                     double max_width, double tol = 1e-10, int max_doublings = 8);

/// Bisection on [lo,hi] (f(lo), f(hi) of opposite sign) to relative tolerance.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double rel_tol = 1e-12);

/// Grows [x0, x0*growth^j] (or shrinks toward 0 for decreasing brackets) until a
/// sign change of f is enclosed, then bisects. Throws BracketError when no sign
/// change appears within `max_grow` steps.
double find_root_increasing(const std::function<double(double)>& f, double x0,
                            double rel_tol = 1e-12, int max_grow = 200);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (x_i, y_i).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares slope of log y vs log x restricted to the upper half of the x range.
double log_slope_upper_half(const std::vector<double>& x, const std::vector<double>& y);

/// Upper bound for sum_{j>=K} j^{-q}, q>1: K^{-q} + K^{1-q}/(q-1).
double power_tail_sum(double q, double K);

/// FNV-1a 64-bit, used to stamp output files with a config hash.
std::uint64_t fnv1a64(const void* data, std::size_t len);

} // namespace riesz
