#include "riesz/numerics.hpp"

#include <algorithm>
#include <cstdint>

namespace riesz {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1,1], positive half; mirrored in use.
constexpr int kGL = 8;
constexpr double kGLNode[kGL] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr double kGLWeight[kGL] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

} // namespace

double gl_panels(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) panels = 1;
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        const double r = 0.5 * h;
        double s = 0.0;
        for (int i = 0; i < kGL; ++i) {
            const double dx = r * kGLNode[i];
            s += kGLWeight[i] * (f(c - dx) + f(c + dx));
        }
        sum += s * r;
    }
    return sum;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int panels0, int max_doublings) {
    if (a == b) return 0.0;
    int panels = std::max(1, panels0);
    double prev = gl_panels(f, a, b, panels);
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        const double cur = gl_panels(f, a, b, panels);
        if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw QuadratureError("quadrature did not converge to requested tolerance");
}

double integrate_osc(const std::function<double(double)>& f, double a, double b,
                     double max_width, double tol, int max_doublings) {
    if (a == b) return 0.0;
    const double len = std::abs(b - a);
    int panels0 = std::max(1, static_cast<int>(std::ceil(len / max_width)));
    return integrate(f, a, b, tol, panels0, max_doublings);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw BracketError("bisect: endpoints do not bracket a root");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= rel_tol * std::max(1.0, std::abs(mid))) return 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

double find_root_increasing(const std::function<double(double)>& f, double x0,
                            double rel_tol, int max_grow) {
    double lo = x0;
    double f0 = f(lo);
    if (f0 == 0.0) return lo;
    if (f0 > 0) {
        // shrink toward zero until f < 0
        double hi = lo;
        for (int i = 0; i < max_grow; ++i) {
            lo *= 0.5;
            if (f(lo) <= 0.0) return bisect(f, lo, hi, rel_tol);
            hi = lo;
        }
        throw BracketError("find_root_increasing: no sign change while shrinking");
    }
    double hi = std::max(2.0 * std::abs(x0), 1.0);
    for (int i = 0; i < max_grow; ++i) {
        if (f(hi) >= 0.0) return bisect(f, lo, hi, rel_tol);
        lo = hi;
        hi *= 2.0;
    }
    throw BracketError("find_root_increasing: no sign change while growing");
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

double log_slope_upper_half(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("log_slope_upper_half: bad input");
    double xmin = x[0], xmax = x[0];
    for (double v : x) {
        xmin = std::min(xmin, v);
        xmax = std::max(xmax, v);
    }
    double cut = 0.5 * (xmin + xmax);
    const auto collect = [&](double c) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] >= c && x[i] > 0 && y[i] > 0) pts.emplace_back(x[i], y[i]);
        return pts;
    };
    auto pts = collect(cut);
    if (pts.size() < 2) pts = collect(std::sqrt(std::max(xmin, 1e-300) * xmax)); // sparse grids
    if (pts.size() < 2) throw std::invalid_argument("log_slope_upper_half: too few usable points");
    std::vector<double> lx, ly;
    for (const auto& [px, py] : pts) {
        lx.push_back(std::log(px));
        ly.push_back(std::log(py));
    }
    return fit_line(lx, ly).slope;
}

double power_tail_sum(double q, double K) {
    if (q <= 1.0) throw std::invalid_argument("power_tail_sum: needs q > 1");
    if (K < 1.0) K = 1.0;
    return std::pow(K, -q) + std::pow(K, 1.0 - q) / (q - 1.0);
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace riesz
