#include <doctest.h>

#include "riesz/perturbations.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

using namespace riesz;

namespace {

PerturbationSpec delta_at(cx nu, double x) {
    PerturbationSpec p;
    DeltaSumPart d;
    d.points.push_back({nu, x});
    p.delta_sums.push_back(d);
    return p;
}

PerturbationSpec gaussian_pert(double sigma, cx amplitude, double center = 0.0) {
    PerturbationSpec p;
    PotentialPart g;
    g.catalog = PotentialPart::Catalog::Gaussian;
    g.sigma = sigma;
    g.center = center;
    g.amplitude = amplitude;
    p.potentials.push_back(g);
    return p;
}

} // namespace

TEST_CASE("form entries: delta on the exact oscillator") {
    Model m = Model::harmonic();
    PerturbationSpec p = delta_at(cx{0, 1}, 0.0);
    const cx b00 = form_entry(m, p, 1, 1);
    CHECK(b00.real() == doctest::Approx(0.0));
    CHECK(b00.imag() == doctest::Approx(std::pow(M_PI, -0.5)).epsilon(1e-12));
    CHECK(std::abs(form_entry(m, p, 1, 2)) == doctest::Approx(0.0)); // odd level vanishes at 0
}

TEST_CASE("form entries: constant potential on the interval is the identity shift") {
    Model m = Model::neumann(1.0);
    PerturbationSpec p;
    PotentialPart box;
    box.catalog = PotentialPart::Catalog::Box;
    box.x1 = -1.0;
    box.x2 = 1.0;
    box.amplitude = cx{0.7, 0};
    p.potentials.push_back(box);
    for (int n : {1, 2, 5}) // constant mode and cosine modes alike
        CHECK(form_entry(m, p, n, n).real() == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(std::abs(form_entry(m, p, 2, 4)) < 1e-9); // distinct cosines stay orthogonal
}

TEST_CASE("form matrix: robin boundary values stay uniformly bounded") {
    Model m = Model::neumann(1.0);
    PerturbationSpec p;
    p.robins.push_back({cx{0, 1}, cx{0, 1}});
    FormMatrix fm = form_matrix(m, p, 64);
    double sup = 0;
    for (const cx& e : fm.entries) sup = std::max(sup, std::abs(e));
    CHECK(sup <= 2.0 + 1e-12);
    CHECK_THROWS_AS(form_entry(Model::harmonic(), p, 1, 1), std::domain_error);
}

TEST_CASE("form matrix: band part has band structure") {
    Model m = Model::power_sequence(2.0);
    PerturbationSpec p;
    BandPart b;
    b.bands.push_back({0, cx{1, 0}, 0.5});
    b.bands.push_back({1, cx{1, 0}, 0.5});
    b.bands.push_back({-1, cx{1, 0}, 0.5});
    p.band_parts.push_back(b);
    FormMatrix fm = form_matrix(m, p, 32);
    for (int i = 1; i <= 32; ++i)
        for (int j = 1; j <= 32; ++j) {
            if (std::abs(i - j) > 1)
                CHECK(fm.at(i, j) == cx{0, 0});
            else
                CHECK(std::abs(fm.at(i, j)) ==
                      doctest::Approx(std::pow(std::min(i, j), 0.5)).epsilon(1e-12));
        }
}

TEST_CASE("form matrix: parity checkerboard for even real potentials") {
    Model m = Model::harmonic();
    FormMatrix fm = form_matrix(m, gaussian_pert(0.7, cx{1, 0}), 24);
    for (int i = 1; i <= 24; ++i)
        for (int j = 1; j <= 24; ++j)
            if ((i + j) % 2 == 1) CHECK(std::abs(fm.at(i, j)) < 1e-13);
    // real symmetric: entries real and symmetric
    for (int i = 1; i <= 24; ++i)
        for (int j = i; j <= 24; ++j) {
            CHECK(fm.at(i, j).imag() == 0.0);
            CHECK(fm.at(i, j) == fm.at(j, i));
        }
}

TEST_CASE("serial and OpenMP assembly produce identical bits") {
    Model m = Model::harmonic();
    PerturbationSpec p = gaussian_pert(0.5, cx{0.3, 0.1});
    p.delta_sums.push_back(DeltaSumPart{{{cx{0, 0.2}, 0.4}, {cx{0.1, 0}, -0.9}}});
    FormMatrix a = form_matrix(m, p, 40, Exec::Serial);
    FormMatrix b = form_matrix(m, p, 40, Exec::OpenMP);
    REQUIRE(a.entries.size() == b.entries.size());
    CHECK(std::memcmp(a.entries.data(), b.entries.data(),
                      a.entries.size() * sizeof(cx)) == 0);
}

TEST_CASE("single-entry and matrix assembly agree") {
    Model m = Model::harmonic();
    PerturbationSpec p = gaussian_pert(0.8, cx{1, 0});
    FormMatrix fm = form_matrix(m, p, 24);
    for (int i : {1, 3, 8, 14})
        for (int j : {1, 5, 24}) {
            const cx e = form_entry(m, p, i, j);
            CHECK(std::abs(e - fm.at(i, j)) < 1e-8);
        }
}

TEST_CASE("adjoint form symmetry |b*(m,n)| = |b(n,m)|") {
    Model m = Model::neumann(1.0);
    PerturbationSpec p = delta_at(cx{0.2, 0.3}, 0.31);
    p.robins.push_back({cx{0, 0.5}, cx{0.1, 0}});
    FormMatrix fm = form_matrix(m, p, 20);
    FormMatrix ad = fm.adjoint();
    for (int i = 1; i <= 20; ++i)
        for (int j = 1; j <= 20; ++j)
            CHECK(std::abs(ad.at(i, j)) == doctest::Approx(std::abs(fm.at(j, i))));
}

TEST_CASE("quadrature convergence: tightening the tolerance barely moves entries") {
    Model m = Model::harmonic();
    PerturbationSpec p = gaussian_pert(0.6, cx{1, 0});
    const cx a = form_entry(m, p, 5, 9, 1e-8);
    const cx b = form_entry(m, p, 5, 9, 1e-12);
    CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("alpha fit: uniformly bounded entries give alpha ~ 0") {
    Model m = Model::neumann(1.0);
    PerturbationSpec p;
    p.robins.push_back({cx{0, 1}, cx{0, 1}});
    FormMatrix fm = form_matrix(m, p, 64);
    AlphaFit f = fit_alpha(fm, 2.0);
    CHECK(std::abs(f.alpha) <= 0.02);
    CHECK(f.mb == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(f.admissible);
}

TEST_CASE("alpha fit: delta at the well bottom decays like (mn)^{-1/4}") {
    Model m = Model::harmonic();
    FormMatrix fm = form_matrix(m, delta_at(cx{0, 1}, 0.0), 200);
    AlphaFit f = fit_alpha(fm, 1.0);
    CHECK(f.alpha == doctest::Approx(0.25).epsilon(0.2)); // 0.25 +- 0.05
    CHECK(std::abs(f.alpha - 0.25) <= 0.05);
}

TEST_CASE("alpha fit: band growth flips admissibility at omega = gamma - 1") {
    Model m = Model::power_sequence(2.0);
    for (double omega : {0.9, 1.1}) {
        PerturbationSpec p;
        BandPart b;
        for (int off : {-1, 0, 1}) b.bands.push_back({off, cx{1, 0}, omega});
        p.band_parts.push_back(b);
        FormMatrix fm = form_matrix(m, p, 200);
        AlphaFit f = fit_alpha(fm, 2.0);
        CHECK(std::abs(f.alpha + omega / 2) <= 0.06);
        CHECK(f.admissible == (omega < 1.0));
    }
}

TEST_CASE("alpha fit is scale-consistent") {
    Model m = Model::harmonic();
    FormMatrix fm = form_matrix(m, delta_at(cx{0, 1}, 0.0), 80);
    FormMatrix scaled = fm;
    for (cx& e : scaled.entries) e *= 3.0;
    AlphaFit f1 = fit_alpha(fm, 1.0);
    AlphaFit f2 = fit_alpha(scaled, 1.0);
    CHECK(f2.alpha == doctest::Approx(f1.alpha).epsilon(1e-12));
    CHECK(f2.mb == doctest::Approx(3.0 * f1.mb).epsilon(1e-12));
}

TEST_CASE("alpha fit rejects an empty matrix") {
    FormMatrix fm;
    fm.M = 8;
    fm.entries.assign(64, cx{0, 0});
    CHECK_THROWS(fit_alpha(fm, 2.0));
}

TEST_CASE("predicted exponents match the theorem table") {
    CHECK(predicted_alpha(2.0, {PerturbationClass::LpTau, 1.0, 0.0, 0, false, 0.01}) ==
          doctest::Approx(1.0 / 12).epsilon(1e-12));
    CHECK(predicted_alpha(2.0, {PerturbationClass::DecayL1}) == doctest::Approx(0.25));
    ClassSpec sing;
    sing.cls = PerturbationClass::Singular;
    sing.s = 0.0;
    sing.compact = true;
    CHECK(predicted_alpha(3.0, sing) == doctest::Approx(0.2).epsilon(1e-12));
    sing.compact = false;
    CHECK(predicted_alpha(3.0, sing) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(predicted_alpha(2.0, {PerturbationClass::DeltaSum}) ==
          doctest::Approx(1.0 / 12).epsilon(1e-12));
    CHECK(predicted_alpha(2.0, {PerturbationClass::DeltaFixedPoint}) == doctest::Approx(0.25));
    // p=2 branch carries the caller-set margin
    CHECK(predicted_alpha(2.0, {PerturbationClass::LpTau, 2.0, 0.0, 0, false, 0.01}) ==
          doctest::Approx((0.5 - 0.01) / 4).epsilon(1e-12));

    // preconditions
    CHECK_THROWS_AS(predicted_alpha(2.0, {PerturbationClass::LpTau, 1.0, 0.5, 0, false, 0.01}),
                    std::domain_error); // tau >= (2/3)(beta-1)(1-1/(2p)) = 1/3
    ClassSpec bad;
    bad.cls = PerturbationClass::Singular;
    bad.s = 0.3; // >= (beta-1)/(2 beta) = 0.25
    CHECK_THROWS_AS(predicted_alpha(2.0, bad), std::domain_error);
    CHECK_THROWS_AS(predicted_alpha(0.9, {PerturbationClass::DecayL1}), std::domain_error);
}

TEST_CASE("fitted alpha is at least the predicted decay minus slack") {
    Model m = Model::harmonic();
    const double slack = 0.05;

    // decayL1: gaussian
    FormMatrix fg = form_matrix(m, gaussian_pert(0.5, cx{1, 0}), 128);
    CHECK(fit_alpha(fg, 1.0).alpha >= predicted_alpha(2.0, {PerturbationClass::DecayL1}) - slack);

    // delta at a fixed generic point
    FormMatrix fd = form_matrix(m, delta_at(cx{1, 0}, 0.617), 128);
    CHECK(fit_alpha(fd, 1.0).alpha >=
          predicted_alpha(2.0, {PerturbationClass::DeltaFixedPoint}) - slack);

    // delta sum at scattered points
    PerturbationSpec ds;
    ds.delta_sums.push_back(
        DeltaSumPart{{{cx{0.2, 0}, 0.3}, {cx{0.15, 0}, -1.1}, {cx{0.15, 0}, 2.4}}});
    FormMatrix fs = form_matrix(m, ds, 128);
    CHECK(fit_alpha(fs, 1.0).alpha >= predicted_alpha(2.0, {PerturbationClass::DeltaSum}) - slack);

    // compactly supported L2 (s=0 singular) as a narrow box
    PerturbationSpec bx;
    PotentialPart box;
    box.catalog = PotentialPart::Catalog::Box;
    box.x1 = -0.4;
    box.x2 = 0.4;
    bx.potentials.push_back(box);
    FormMatrix fb = form_matrix(m, bx, 128);
    ClassSpec sing;
    sing.cls = PerturbationClass::Singular;
    sing.s = 0;
    sing.compact = true;
    CHECK(fit_alpha(fb, 1.0).alpha >= predicted_alpha(2.0, sing) - slack);
}

TEST_CASE("randomized perturbations keep the structural invariants") {
    // hand-rolled generator sweep: symmetry of mixed parts, adjoint symmetry,
    // and exact scale consistency of the envelope fit
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Model m = Model::neumann(1.0);
    for (int trial = 0; trial < 6; ++trial) {
        PerturbationSpec p;
        DeltaSumPart d;
        const int npts = 1 + static_cast<int>(3.0 * std::abs(U(rng)));
        for (int i = 0; i < npts; ++i)
            d.points.push_back({cx{0.3 * U(rng), 0.3 * U(rng)}, 0.95 * U(rng)});
        p.delta_sums.push_back(d);
        if (U(rng) > 0) p.robins.push_back({cx{U(rng), U(rng)}, cx{U(rng), U(rng)}});
        PotentialPart g;
        g.catalog = PotentialPart::Catalog::Gaussian;
        g.sigma = 0.1 + 0.4 * std::abs(U(rng));
        g.center = 0.4 * U(rng);
        g.amplitude = cx{U(rng), U(rng)};
        p.potentials.push_back(g);

        FormMatrix fm = form_matrix(m, p, 48, Exec::OpenMP, 1e-8);
        // all part types are symmetric bilinear forms on real eigenfunctions
        for (int i = 1; i <= 48; i += 5)
            for (int j = i; j <= 48; j += 7)
                CHECK(std::abs(fm.at(i, j) - fm.at(j, i)) < 1e-12);
        FormMatrix ad = fm.adjoint();
        for (int i = 1; i <= 48; i += 7)
            for (int j = 1; j <= 48; j += 5)
                CHECK(std::abs(std::abs(ad.at(i, j)) - std::abs(fm.at(j, i))) < 1e-14);

        const double c = 0.25 + 2.0 * std::abs(U(rng));
        FormMatrix scaled = fm;
        for (cx& e : scaled.entries) e *= c;
        AlphaFit f1 = fit_alpha(fm, 2.0);
        AlphaFit f2 = fit_alpha(scaled, 2.0);
        CHECK(f2.alpha == doctest::Approx(f1.alpha).epsilon(1e-12));
        CHECK(f2.mb == doctest::Approx(c * f1.mb).epsilon(1e-12));
    }
}

TEST_CASE("p-subordination exponent") {
    CHECK(p_subordination(0.5, 1.0, 0.5) == doctest::Approx(0.5));
    CHECK(p_subordination(2.0, 1.0, 1.0) == doctest::Approx(0.0));
    CHECK(p_subordination(0.1, 2.0, 0.5) == doctest::Approx(0.75));
    CHECK_THROWS_AS(p_subordination(0.5, 1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(p_subordination(0.5, 1.0, 0.0), std::domain_error);
}

TEST_CASE("binary cache round trip") {
    Model m = Model::neumann(1.0);
    FormMatrix fm = form_matrix(m, delta_at(cx{0.1, 0.7}, 0.2), 12);
    const std::string path = "test_cache.rzfm";
    save_form_cache(fm, path);
    FormMatrix back = load_form_cache(path);
    REQUIRE(back.M == fm.M);
    CHECK(std::memcmp(back.entries.data(), fm.entries.data(),
                      fm.entries.size() * sizeof(cx)) == 0);
    std::remove(path.c_str());
    CHECK_THROWS(load_form_cache("does_not_exist.rzfm"));
}

TEST_CASE("potential closed-form integrals") {
    PotentialPart g;
    g.catalog = PotentialPart::Catalog::Gaussian;
    g.sigma = 0.4;
    g.amplitude = cx{2, 0};
    CHECK(g.integral(HUGE_VAL).real() ==
          doctest::Approx(2 * 0.4 * std::sqrt(2 * M_PI)).epsilon(1e-12));
    PotentialPart pd;
    pd.catalog = PotentialPart::Catalog::PowerDecay;
    pd.eps = 0.5;
    CHECK(pd.integral(HUGE_VAL).real() == doctest::Approx(4.0).epsilon(1e-12));
    // clipped closed form matches quadrature of the shape
    const double clipped = pd.integral(3.0).real();
    const double quad = integrate([&](double x) { return pd.shape(x); }, -3, 3, 1e-12, 32);
    CHECK(clipped == doctest::Approx(quad).epsilon(1e-10));
}
