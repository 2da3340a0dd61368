#include "riesz/airy.hpp"

#include <cmath>
#include <stdexcept>

namespace riesz {

namespace {

constexpr double kAi0 = 0.3550280538878172392600632;   // Ai(0)
constexpr double kAip0 = -0.2588194037928067984051836; // Ai'(0)
constexpr double kSeriesHi = 3.5;  // Maclaurin upper switch
constexpr double kSeriesLo = -7.0; // Maclaurin lower switch
constexpr double kAsympHi = 8.0;   // positive asymptotics / stepping anchor

// u_k of the Airy asymptotic expansions; v_k = (6k+1)/(1-6k) u_k.
double asym_u(int k, double prev) {
    const double a = 6.0 * k - 5.0, b = 6.0 * k - 3.0, c = 6.0 * k - 1.0;
    return prev * a * b * c / ((2.0 * k - 1.0) * 216.0 * k);
}

// Ai(z) and Ai'(z) for z >= kAsympHi.
void ai_asymptotic_pos(double z, double& ai, double& aip) {
    const double xi = (2.0 / 3.0) * z * std::sqrt(z);
    double u = 1.0, su = 1.0, sv = 1.0;
    double sign = -1.0, pw = 1.0;
    double prev_term = 1.0;
    for (int k = 1; k <= 40; ++k) {
        u = asym_u(k, u);
        pw /= xi;
        const double tu = u * pw;
        if (tu > prev_term) break; // divergent tail reached
        prev_term = tu;
        su += sign * tu;
        sv += sign * tu * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        sign = -sign;
        if (tu < 1e-18) break;
    }
    const double pre = std::exp(-xi) / (2.0 * std::sqrt(M_PI));
    ai = pre * su / std::pow(z, 0.25);
    aip = -pre * sv * std::pow(z, 0.25);
}

// Ai(-s) for s >= |kSeriesLo|.
double ai_asymptotic_neg(double s) {
    const double xi = (2.0 / 3.0) * s * std::sqrt(s);
    double u = 1.0;
    double even = 1.0, odd = 0.0;
    double sign_e = -1.0, sign_o = 1.0, pw = 1.0;
    for (int k = 1; k <= 40; ++k) {
        u = asym_u(k, u);
        pw /= xi;
        const double t = u * pw;
        if (k % 2 == 1) {
            odd += sign_o * t;
            sign_o = -sign_o;
        } else {
            even += sign_e * t;
            sign_e = -sign_e;
        }
        if (t < 1e-18) break;
    }
    const double ph = xi - 0.25 * M_PI;
    return (std::cos(ph) * even + std::sin(ph) * odd) / (std::sqrt(M_PI) * std::pow(s, 0.25));
}

double ai_maclaurin(double z) {
    // Ai = Ai(0) f + Ai'(0) g with f,g the even/odd solutions of y'' = z y.
    const double z3 = z * z * z;
    double f = 1.0, tf = 1.0;
    double g = z, tg = z;
    for (int k = 0; k < 60; ++k) {
        tf *= z3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= z3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f += tf;
        g += tg;
        if (std::abs(tf) < 1e-18 && std::abs(tg) < 1e-18) break;
    }
    return kAi0 * f + kAip0 * g;
}

// One Taylor step of y'' = z y from z0 to z0+h carrying (y, y').
void taylor_step(double z0, double h, double& y, double& yp) {
    constexpr int kOrder = 28;
    double a[kOrder + 1];
    a[0] = y;
    a[1] = yp;
    a[2] = 0.5 * z0 * a[0];
    for (int n = 1; n + 2 <= kOrder; ++n)
        a[n + 2] = (z0 * a[n] + a[n - 1]) / ((n + 1.0) * (n + 2.0));
    double sy = a[kOrder], syp = kOrder * a[kOrder];
    for (int n = kOrder - 1; n >= 0; --n) {
        sy = a[n] + h * sy;
        if (n >= 1) syp = n * a[n] + h * syp;
    }
    y = sy;
    yp = syp;
}

// Positive mid-range: step from the asymptotic anchor down to z (stable: Ai
// grows in the stepping direction).
double ai_stepped(double z) {
    double y, yp;
    ai_asymptotic_pos(kAsympHi, y, yp);
    double cur = kAsympHi;
    const double step = 0.5;
    while (cur - z > 1e-14) {
        const double h = std::min(step, cur - z);
        taylor_step(cur, -h, y, yp);
        cur -= h;
    }
    return y;
}

} // namespace

double airy_ai(double z) {
    if (!std::isfinite(z)) throw std::domain_error("airy_ai: non-finite argument");
    if (z >= kAsympHi) {
        double ai, aip;
        ai_asymptotic_pos(z, ai, aip);
        return ai;
    }
    if (z > kSeriesHi) return ai_stepped(z);
    if (z >= kSeriesLo) return ai_maclaurin(z);
    return ai_asymptotic_neg(-z);
}

double bessel_k13(double w) {
    if (!(w > 0)) throw std::domain_error("bessel_k13: needs w > 0");
    const double z = std::pow(1.5 * w, 2.0 / 3.0);
    return M_PI * std::sqrt(3.0) * airy_ai(z) / std::sqrt(z);
}

} // namespace riesz
