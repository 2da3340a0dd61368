#include <doctest.h>

#include "riesz/models.hpp"

#include <cmath>

using namespace riesz;

TEST_CASE("neumann eigenpairs") {
    // k=2, x=0: sqrt(mu)=pi, so psi = cos(pi)/sqrt(l) = -1
    EigenPair p = neumann_eigenpair(1.0, 2, 0.0);
    CHECK(p.mu == doctest::Approx(M_PI * M_PI).epsilon(1e-14));
    CHECK(p.psi == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(neumann_eigenpair(1.0, 0, 0.33).psi == doctest::Approx(1.0 / std::sqrt(2.0)));
    EigenPair q = neumann_eigenpair(2.0, 3, -2.0);
    CHECK(q.mu == doctest::Approx(std::pow(3 * M_PI / 4, 2)));
    CHECK(q.psi == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK_THROWS_AS(neumann_eigenpair(1.0, 1, 1.5), std::domain_error);

    for (int k : {0, 3, 8}) {
        const double nrm = integrate(
            [&](double x) { return std::pow(neumann_eigenpair(1.0, k, x).psi, 2); }, -1, 1, 1e-12,
            64);
        CHECK(nrm == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("omega constants") {
    OmegaPair o2 = omega_constants(2.0);
    CHECK(std::abs(o2.omega - M_PI / 2) < 1e-10);
    CHECK(std::abs(o2.omega_prime - M_PI) < 1e-8);
    OmegaPair o1 = omega_constants(1.0);
    CHECK(std::abs(o1.omega - 4.0 / 3.0) < 1e-10);
    CHECK(std::abs(o1.omega_prime - 4.0) < 1e-10);
    OmegaPair oi = omega_constants(HUGE_VAL);
    CHECK(oi.omega == 2.0);
    CHECK(oi.omega_prime == 2.0);
    // Omega' = (beta+2)/beta * Omega, by parts
    for (double b : {1.5, 3.0, 4.7}) {
        OmegaPair o = omega_constants(b);
        CHECK(o.omega_prime == doctest::Approx((b + 2.0) / b * o.omega).epsilon(1e-10));
    }
}

TEST_CASE("Bohr-Sommerfeld closed form and remainder") {
    CHECK(bs_eigenvalue(2.0, 5) == doctest::Approx(11.0).epsilon(1e-12));
    CHECK(bs_eigenvalue(2.0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    // beta=4 closed form against the direct phase-integral root
    const Well w4 = power_well(4.0);
    CHECK(bs_eigenvalue(4.0, 10) ==
          doctest::Approx(bs_eigenvalue_general(w4, 10)).epsilon(1e-9));
    for (int k : {10, 37, 120, 500})
        CHECK(std::abs(bs_eigenvalue(2.0, k) - (2.0 * k + 1.0)) <= 2.0 / (k + 1));
}

TEST_CASE("turning points") {
    const Well w2 = power_well(2.0);
    TurningPoint t = turning_point(w2, 4.0);
    CHECK(t.x_mu == doctest::Approx(2.0));
    CHECK(t.a_mu == doctest::Approx(4.0));
    TurningPoint t4 = turning_point(power_well(4.0), 16.0);
    CHECK(t4.x_mu == doctest::Approx(2.0));
    CHECK(t4.a_mu == doctest::Approx(32.0));
    CHECK(turning_point(w2, 1e-12).x_mu == doctest::Approx(1e-6).epsilon(1e-9));
    // general tabulated well goes through the root finder
    Well gen;
    gen.Q = [](double x) { return x * x + std::pow(x, 4); };
    gen.dQ = [](double x) { return 2 * x + 4 * std::pow(x, 3); };
    CHECK(turning_point(gen, 2.0).x_mu == doctest::Approx(1.0).epsilon(1e-10));
    Well bad;
    bad.Q = [](double x) { return std::sin(x); };
    bad.dQ = [](double x) { return std::cos(x); };
    CHECK_THROWS_AS(turning_point(bad, 3.0), BracketError);
    CHECK_THROWS_AS(turning_point(w2, -1.0), std::domain_error);
}

TEST_CASE("phase integrals") {
    const Well w = power_well(2.0);
    CHECK(phase_zeta(w, 1.0, 0.0).value == doctest::Approx(M_PI / 4).epsilon(1e-11));
    CHECK(phase_zeta(w, 1.0, 0.0).forbidden == false);
    CHECK(phase_zeta(w, 4.0, 2.0).value == doctest::Approx(0.0));
    const Phase f = phase_zeta(w, 1.0, 2.0);
    CHECK(f.forbidden == true);
    CHECK(f.value ==
          doctest::Approx(std::sqrt(3.0) - 0.5 * std::log(2.0 + std::sqrt(3.0))).epsilon(1e-10));
    CHECK_THROWS_AS(phase_zeta(w, 1.0, -0.5), std::domain_error);
}

TEST_CASE("hermite functions") {
    CHECK(hermite_psi(0, 0.0) == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-14));
    CHECK(hermite_psi(1, 0.0) == 0.0);
    CHECK(hermite_psi(2, 0.0) ==
          doctest::Approx(-std::pow(M_PI, -0.25) / std::sqrt(2.0)).epsilon(1e-14));
    const double ortho = integrate(
        [](double x) { return hermite_psi(5, x) * hermite_psi(7, x); }, -12, 12, 1e-12, 64);
    CHECK(std::abs(ortho) < 1e-10);
    const double nrm = integrate(
        [](double x) { return std::pow(hermite_psi(5, x), 2); }, -12, 12, 1e-12, 64);
    CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hermite_psi(40, 60.0) == 0.0); // underflow far in the forbidden region
}

TEST_CASE("wkb state satisfies its defining equations") {
    const Well w = power_well(2.0);
    std::vector<double> ratio;
    for (double mu : {21.0, 41.0, 201.0, 601.0}) {
        WkbState st = make_wkb_state(w, mu);
        CHECK(w.Q(st.x_mu) == doctest::Approx(mu).epsilon(1e-12));
        CHECK(phase_zeta(w, mu, st.x_mu - st.delta).value == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(phase_zeta(w, mu, st.x_mu + st.delta1).value == doctest::Approx(1.0).epsilon(1e-9));
        ratio.push_back(st.delta * std::pow(st.a_mu, 1.0 / 3.0));
    }
    // delta ~ a_mu^{-1/3}: the scaled widths stay in a narrow band
    for (double r : ratio) {
        CHECK(r > 0.5);
        CHECK(r < 3.0);
    }
    CHECK(ratio.back() == doctest::Approx(ratio.front()).epsilon(0.15));
}

TEST_CASE("wkb eigenfunction envelopes and parity") {
    const Well w = power_well(2.0);
    const int k = 30;
    const double mu = bs_eigenvalue(2.0, k);
    WkbState st = make_wkb_state(w, mu);
    // oscillatory envelope u^2 <= pi (mu-Q)^{-1/2} (2 + 1/(2 zeta)) for zeta > 1
    for (double x = 0.0; x < st.x_mu - st.delta; x += 0.037) {
        const Phase ph = phase_zeta(w, mu, x);
        if (ph.value <= 1.0) continue;
        const double u = wkb_u(w, st, x);
        CHECK(u * u <= M_PI / std::sqrt(mu - w.Q(x)) * (2.0 + 0.5 / ph.value) * (1 + 1e-9));
    }
    // forbidden-region bound with A1 = 2.7
    for (double x = st.x_mu + st.delta1; x < st.x_cut; x += 0.093) {
        const Phase ph = phase_zeta(w, mu, x);
        const double u = wkb_u(w, st, x);
        CHECK(std::abs(u) <=
              (2.7 / 2.0) * std::pow(w.Q(x) - mu, -0.25) * std::exp(-ph.value) * (1 + 1e-9));
    }
    for (double x : {0.3, 1.7, 4.4}) {
        CHECK(wkb_psi(w, st, k, -x) == doctest::Approx(std::pow(-1.0, k) * wkb_psi(w, st, k, x)));
        CHECK(wkb_psi(w, st, k - 1, -x) == -wkb_psi(w, st, k - 1, x)); // odd level below
    }
}

TEST_CASE("wkb matches the Hermite oracle at beta=2") {
    const Well w = power_well(2.0);
    double prev_err = 1.0;
    for (int k : {20, 60}) {
        WkbState st = make_wkb_state(w, bs_eigenvalue(2.0, k));
        double num = 0, den = 0;
        for (int i = 0; i <= 800; ++i) {
            const double x = -10.0 + 20.0 * i / 800.0;
            const double a = wkb_psi(w, st, k, x);
            const double b = hermite_psi(k, x);
            num += (a - b) * (a - b);
            den += b * b;
        }
        const double err = std::sqrt(num / den);
        CHECK(err < 0.05);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("wkb grid normalization") {
    const Well w = power_well(2.0);
    const int k = 20;
    WkbState st = make_wkb_state(w, bs_eigenvalue(2.0, k));
    double nrm = 0;
    const int grid = 4000;
    for (int i = 0; i <= grid; ++i) {
        const double x = -st.x_cut + 2 * st.x_cut * i / grid;
        nrm += std::pow(wkb_psi(w, st, k, x), 2) * (2 * st.x_cut / grid);
    }
    CHECK(nrm == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("u norm main term and asymptotics") {
    const Well w2 = power_well(2.0);
    WkbState st = make_wkb_state(w2, 61.0);
    UNorm un = u_norm_main_term(w2, st, 2.0);
    CHECK(std::abs(un.quadrature - M_PI * M_PI) / (M_PI * M_PI) < 0.03);
    CHECK(un.asymptotic == doctest::Approx(M_PI * M_PI).epsilon(1e-8));
    // the actual ||u||^2 approaches the asymptotic value as mu grows
    WkbState hi = make_wkb_state(w2, 601.0);
    CHECK(std::abs(st.u_norm_sq - M_PI * M_PI) > std::abs(hi.u_norm_sq - M_PI * M_PI));
    // beta=4: quadrature slope in mu is -1/4
    const Well w4 = power_well(4.0);
    UNorm u1 = u_norm_main_term(w4, make_wkb_state(w4, 100.0), 4.0);
    UNorm u2 = u_norm_main_term(w4, make_wkb_state(w4, 10000.0), 4.0);
    const double slope = std::log(u2.quadrature / u1.quadrature) / std::log(100.0);
    CHECK(slope == doctest::Approx(-0.25).epsilon(0.08));
}

TEST_CASE("sigma branches") {
    CHECK(sigma_n(0, 2, 10) == doctest::Approx(0.1 * std::log(10 * M_E)).epsilon(1e-14));
    CHECK(sigma_n(2, 1, 10) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(sigma_n(1, 1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(sigma_n(0.2, 0.5, 5), std::invalid_argument);
    CHECK_THROWS_AS(sigma_n(0, 2, 0), std::invalid_argument);
}

TEST_CASE("gap-parameter fitting") {
    Model nm = Model::neumann(1.0);
    GapFit fn = fit_gap_params(nm.mu_vector(400), 2.0);
    CHECK(fn.ok);
    // largest kappa over k > N0 = 1 is the k=2 ratio, 3 pi^2 / 8; in
    // particular kappa >= pi^2/4, the exact-gap lower bound
    CHECK(fn.kappa == doctest::Approx(3 * M_PI * M_PI / 8).epsilon(1e-12));
    CHECK(fn.kappa >= M_PI * M_PI / 4);
    CHECK(fn.n0 == 1);
    CHECK(nm.gaps().kappa == doctest::Approx(fn.kappa).epsilon(1e-12));

    Model hm = Model::harmonic();
    GapFit fh = fit_gap_params(hm.mu_vector(200), 1.0);
    CHECK(fh.kappa == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fh.n0 == 1);

    // beta=4 sequence: kappa within 10% of the gap-law coefficient
    Model m4 = Model::single_well(4.0);
    OmegaPair o4 = omega_constants(4.0);
    const double coeff = (2 * M_PI / o4.omega_prime) * std::pow(M_PI / o4.omega, 1.0 / 3.0);
    GapFit f4 = fit_gap_params(m4.mu_vector(600), 4.0 / 3.0);
    CHECK(std::abs(f4.kappa - coeff) / coeff < 0.10);

    // non-monotone head raises N0; fully decreasing sequence fails
    GapFit fb = fit_gap_params({5, 1, 2, 4, 8, 16, 32, 64, 128, 256}, 1.0);
    CHECK(fb.ok);
    CHECK(fb.n0 == 2);
    GapFit fd = fit_gap_params({8, 7, 6, 5, 4, 3, 2, 1}, 1.0);
    CHECK_FALSE(fd.ok);
}

TEST_CASE("gap lower bound of the distance lemma holds on model sequences") {
    for (Model m : {Model::neumann(1.0), Model::harmonic(), Model::single_well(3.0)}) {
        const GapParams g = m.gaps();
        const std::vector<double> mu = m.mu_vector(300);
        for (int j = g.n0 + 1; j < 300; j += 17)
            for (int k = j + 1; k <= 300; k += 23) {
                const double lower =
                    g.kappa / g.gamma * (std::pow(k - 1.0, g.gamma) - std::pow(j, g.gamma));
                CHECK(mu[k - 1] - mu[j - 1] >= lower - 1e-9 * std::abs(lower));
            }
    }
}

TEST_CASE("model surface") {
    Model m = Model::single_well(2.0);
    CHECK(m.gaps().gamma == doctest::Approx(1.0));
    CHECK_THROWS_AS(m.psi(3, 0.1), std::logic_error); // prepare() not called
    m.prepare(8);
    CHECK(m.psi(1, 0.2) == doctest::Approx(m.psi(1, -0.2)));
    CHECK(m.low_index_flag(3));
    CHECK_FALSE(m.low_index_flag(12));

    Model d = Model::diagonal({1, 4, 9, 16, 25}, 2.0);
    CHECK(d.mu(3) == 9.0);
    CHECK_THROWS_AS(d.mu(9), std::out_of_range);
    CHECK_THROWS_AS(d.psi(1, 0.0), std::logic_error);
    CHECK(d.parity(2) == 0);

    Model p = Model::power_sequence(1.5);
    CHECK(p.mu(5000) == doctest::Approx(std::pow(5000.0, 1.5)));

    CHECK_THROWS_AS(Model::single_well(1.0), std::domain_error);
    CHECK_THROWS_AS(Model::neumann(-2.0), std::domain_error);
}
