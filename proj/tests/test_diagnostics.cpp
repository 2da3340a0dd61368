#include <doctest.h>

#include "riesz/diagnostics.hpp"

#include <cmath>

using namespace riesz;

TEST_CASE("riesz report on the unperturbed model") {
    Model m = Model::neumann(1.0);
    FormMatrix fm = form_matrix(m, {}, 32);
    GalerkinResult g = galerkin_spectrum(m, fm);
    auto recs = correction_report(m, fm, g, 2, 30);
    RieszReport rep = riesz_report(recs, 0.0, 2.0);
    CHECK(rep.sup_proj_norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.bari_partial == 0.0);
    CHECK(rep.admissible);
    CHECK(rep.bari_predicate); // 2*0 + 2 > 3/2
    CHECK(std::abs(rep.proj_slope) < 1e-6);
}

TEST_CASE("bari predicate branches") {
    RieszReport a = riesz_report({}, 0.0, 1.2); // alpha <= 1/2: needs 2a+g > 3/2
    CHECK_FALSE(a.bari_predicate);
    CHECK(a.admissible);
    RieszReport b = riesz_report({}, 0.8, 0.6); // alpha > 1/2: needs g > 1/2
    CHECK(b.bari_predicate);
    RieszReport c = riesz_report({}, 0.8, 0.4);
    CHECK_FALSE(c.bari_predicate);
}

TEST_CASE("bari partial sums flatten in the admissible interval regime") {
    Model m = Model::neumann(1.0);
    PerturbationSpec p;
    DeltaSumPart d;
    d.points.push_back({cx{0, 0.3}, 0.0});
    p.delta_sums.push_back(d);
    FormMatrix fm = form_matrix(m, p, 120);
    GalerkinResult g = galerkin_spectrum(m, fm);
    auto recs = correction_report(m, fm, g, 3, 60);
    RieszReport rep = riesz_report(recs, 0.0, 2.0);
    CHECK(rep.bari_predicate); // 2*0 + 2 > 3/2
    CHECK(rep.bari_partial > 0.0);
    // increments die off: the upper half of the range contributes a small share
    CHECK(rep.bari_tail_fraction < 0.25);
}

TEST_CASE("counterexample blocks: constant couplings match the closed form") {
    for (double t : {0.0, 0.3, 0.6, 0.9}) {
        std::vector<double> ts(50, t);
        CounterexampleBlocks cb = counterexample_blocks(1.0, ts, 50);
        CHECK(cb.max_value_err < 1e-10);
        CHECK(cb.max_proj_err < 1e-10);
        CHECK(cb.closed_proj[0] == doctest::Approx(1.0 / (1.0 - t * t)).epsilon(1e-14));
    }
}

TEST_CASE("counterexample blocks: t -> 1 drives projection growth at unit slope") {
    std::vector<double> ts(50);
    for (int k = 1; k <= 50; ++k) ts[k - 1] = 1.0 - 1.0 / k;
    CounterexampleBlocks cb = counterexample_blocks(1.0, ts, 50);
    CHECK(cb.max_value_err < 1e-10);
    CHECK(std::abs(cb.proj_slope - 1.0) <= 0.05);
    // norms ~ k/2 at the top of the range
    CHECK(cb.oracle_proj[2 * 50 - 1] == doctest::Approx(50.0 * 50.0 / 99.0).epsilon(1e-6));
    CHECK_THROWS(counterexample_blocks(1.0, {1.5}, 1));
    CHECK_THROWS(counterexample_blocks(-1.0, {0.5}, 1));
}

TEST_CASE("schur sums: admissible interval scaling is bounded with max at small n") {
    Model m = Model::neumann(1.0);
    SchurSums s = schur_row_sums(m.mu_vector(400), m.gaps(), 0.0, 100);
    CHECK(s.row_bounded);
    CHECK(s.col_bounded);
    int argmax = 0;
    for (int i = 1; i < 100; ++i)
        if (s.row[i] > s.row[argmax]) argmax = i;
    CHECK(argmax <= 5);
    // weighted row sums track sigma_{0,2}: bounded multiple both ways
    for (int n : {10, 40, 90}) {
        const double sig = sigma_n(0.0, 2.0, n);
        CHECK(s.row[n - 1] / sig > 0.1);
        CHECK(s.row[n - 1] / sig < 10.0);
    }
}

TEST_CASE("schur sums: the critical line 2 alpha + gamma = 1 diverges") {
    Model m = Model::power_sequence(1.0); // gamma = 1, alpha = 0
    SchurSums s = schur_row_sums(m.mu_vector(480), m.gaps(), 0.0, 240);
    CHECK_FALSE(s.row_bounded);
}

TEST_CASE("schur maxima decrease in alpha") {
    Model m = Model::neumann(1.0);
    const auto mu = m.mu_vector(240);
    double prev = HUGE_VAL;
    for (double alpha : {0.0, 0.3, 0.8, 1.3}) {
        SchurSums s = schur_row_sums(mu, m.gaps(), alpha, 100);
        CHECK(s.max_row <= prev + 1e-12);
        prev = s.max_row;
    }
}
