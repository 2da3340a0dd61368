#pragma once

namespace riesz {

/// Airy function Ai on the real line. Maclaurin series on the central range,
/// asymptotic expansions in both tails, and for the positive mid-range (where
/// the series cancels catastrophically and the asymptotics have not yet
/// bottomed out) Taylor stepping of y'' = z y inward from an asymptotic anchor.
double airy_ai(double z);

/// Modified Bessel K of order 1/3 for w > 0, evaluated through airy_ai via
/// K_{1/3}(w) = pi*sqrt(3)*Ai(z)/sqrt(z) with w = (2/3) z^{3/2}.
double bessel_k13(double w);

} // namespace riesz
