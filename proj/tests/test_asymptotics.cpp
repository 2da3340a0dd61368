#include <doctest.h>

#include "riesz/asymptotics.hpp"

#include <cmath>

using namespace riesz;

namespace {

PerturbationSpec unit_gaussian(double sigma) {
    PerturbationSpec p;
    PotentialPart g;
    g.catalog = PotentialPart::Catalog::Gaussian;
    g.sigma = sigma;
    g.amplitude = cx{1.0, 0} / g.integral(HUGE_VAL, 1e-12);
    p.potentials.push_back(g);
    return p;
}

} // namespace

TEST_CASE("eigenvalue and gap laws at beta = 2 are exact up to the half shift") {
    MuGapReport rep = check_mu_and_gaps(2.0, 10, 500);
    CHECK(rep.mu.terminal_ratio == doctest::Approx(1.001).epsilon(1e-6)); // (k+1/2)/k at 500
    CHECK(rep.gap.terminal_ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.mu.terminal_ratio > 0.99);
    CHECK(rep.mu.terminal_ratio < 1.01);
}

TEST_CASE("eigenvalue ratio settles for beta = 3 as well") {
    MuGapReport rep = check_mu_and_gaps(3.0, 10, 500);
    CHECK(rep.mu.terminal_ratio > 0.99);
    CHECK(rep.mu.terminal_ratio < 1.01);
}

TEST_CASE("eigenvalue and gap laws at beta = 4 settle within 2 percent") {
    MuGapReport rep = check_mu_and_gaps(4.0, 10, 500);
    CHECK(std::abs(rep.mu.terminal_ratio - 1.0) < 0.02);
    CHECK(std::abs(rep.gap.terminal_ratio - 1.0) < 0.02);
    CHECK(std::abs(rep.mu.drift) < 0.01);
}

TEST_CASE("first-correction law on the interval") {
    Model m = Model::neumann(1.0);
    FitReport rep = check_lambda1_asym(m, unit_gaussian(0.05), 40, 80, 8);
    CHECK(rep.points.back().target == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(rep.terminal_ratio - 1.0) < 1e-3);
}

TEST_CASE("first-correction law on the oscillator") {
    Model m = Model::harmonic();
    FitReport rep = check_lambda1_asym(m, unit_gaussian(0.5), 60, 120, 6);
    const double target = 1.0 / (M_PI * std::sqrt(2.0));
    CHECK(rep.points.back().target == doctest::Approx(target).epsilon(1e-10));
    CHECK(std::abs(rep.terminal_ratio - 1.0) < 0.02);
}

TEST_CASE("first-correction law through the WKB eigenfunctions (beta = 3)") {
    Model m = Model::single_well(3.0);
    FitReport rep = check_lambda1_asym(m, unit_gaussian(1.0), 12, 40, 8);
    CHECK(rep.terminal_ratio == doctest::Approx(1.0).epsilon(0.015));
    // the deviation from the law shrinks across the range
    CHECK(std::abs(rep.points.back().ratio - 1.0) < std::abs(rep.points.front().ratio - 1.0));
}

TEST_CASE("WKB normalization keeps the L2 slope flat (beta = 3)") {
    Model m = Model::single_well(3.0);
    FitReport rep = check_lq_norms(m, 2.0, 0.0, 15, 40, 8);
    CHECK(std::abs(rep.fitted_slope) < 0.03);
}

TEST_CASE("zero-mean potentials scale to zero") {
    Model m = Model::neumann(1.0);
    PerturbationSpec p;
    PotentialPart plus;
    plus.catalog = PotentialPart::Catalog::Gaussian;
    plus.sigma = 0.02;
    plus.center = 0.3;
    plus.amplitude = cx{1, 0} / plus.integral(HUGE_VAL, 1e-12);
    PotentialPart minus = plus;
    minus.center = -0.3;
    minus.amplitude = -plus.amplitude;
    p.potentials.push_back(plus);
    p.potentials.push_back(minus);
    FitReport rep = check_lambda1_asym(m, p, 50, 90, 5);
    for (const auto& pt : rep.points) CHECK(std::abs(pt.observed) < 1e-3);
}

TEST_CASE("lambda1 admissibility errors") {
    Model m = Model::neumann(1.0);
    PerturbationSpec robin;
    robin.robins.push_back({cx{0, 1}, cx{0, 1}});
    CHECK_THROWS_AS(check_lambda1_asym(m, robin, 10, 20), std::domain_error);
    CHECK_THROWS_AS(check_lambda1_asym(m, PerturbationSpec{}, 10, 20), std::domain_error);
}

TEST_CASE("two-term prediction") {
    CHECK(two_term_prediction(2.0, 7, cx{0, 0}).real() == doctest::Approx(15.0).epsilon(1e-10));
    const cx base = two_term_prediction(2.0, 20, cx{1, 0});
    const cx twice = two_term_prediction(2.0, 20, cx{2, 0});
    const cx none = two_term_prediction(2.0, 20, cx{0, 0});
    CHECK(std::abs((twice - none) - 2.0 * (base - none)) < 1e-12);
    CHECK_THROWS_AS(two_term_prediction(1.5, 5, cx{0, 0}), std::domain_error);
}

TEST_CASE("Lq exponent table") {
    CHECK(lq_target_exponent(2.0, 1.0, 0.0) == doctest::Approx(0.25));
    CHECK(lq_target_exponent(2.0, 2.0, 0.0) == doctest::Approx(0.0));
    CHECK(lq_target_exponent(2.0, 4.0, 0.0) == doctest::Approx(-0.125));
    CHECK(lq_target_exponent(2.0, HUGE_VAL, 0.0) == doctest::Approx(-1.0 / 12));
    // q > 4 branch approaches the sup-norm exponent
    CHECK(lq_target_exponent(2.0, 1e9, 0.0) == doctest::Approx(-1.0 / 12).epsilon(1e-6));
    // weight contributes 2 tau / (beta + 2)
    CHECK(lq_target_exponent(2.0, 2.0, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("normalization slope is flat") {
    Model m = Model::harmonic();
    FitReport rep = check_lq_norms(m, 2.0, 0.0, 40, 120, 10);
    CHECK(std::abs(rep.fitted_slope) < 0.02);
}

TEST_CASE("weighted second moment follows the turning-point scale") {
    Model m = Model::harmonic();
    FitReport rep = check_lq_norms(m, 2.0, 1.0, 40, 120, 10);
    CHECK(std::abs(rep.fitted_slope - 0.5) < 0.03);
}

TEST_CASE("the beta -> infinity limit of the first-correction constant is the interval one") {
    const OmegaPair o = omega_constants(1000.0);
    const double c = std::pow(M_PI / o.omega, -2.0 / 1002.0) / o.omega_prime;
    CHECK(std::abs(c - 0.5) / 0.5 < 0.01);
}

TEST_CASE("Cesaro means of the interval remainder decrease") {
    Model m = Model::neumann(1.0);
    FitReport rep = check_lambda1_asym(m, unit_gaussian(0.05), 5, 60, 56);
    std::vector<double> cesaro;
    double acc = 0;
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        acc += std::abs(rep.points[i].observed - rep.points[i].target);
        cesaro.push_back(acc / (i + 1));
    }
    for (std::size_t i = 3; i < cesaro.size(); ++i) CHECK(cesaro[i] <= cesaro[i - 1] + 1e-15);
}
