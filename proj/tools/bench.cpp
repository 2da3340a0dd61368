// Serial-vs-OpenMP comparison for the data-parallel kernels: form-matrix
// assembly, enclosure boundary sampling, and per-index corrections.

#include "riesz/corrections.hpp"
#include "riesz/localization.hpp"
#include "riesz/perturbations.hpp"

#include <chrono>
#include <cstdio>
#include <omp.h>

using namespace riesz;

namespace {

template <typename F>
double time_ms(F&& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double par_ms) {
    std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, par_ms,
                serial_ms / par_ms);
}

} // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        Model m = Model::harmonic();
        PerturbationSpec pert;
        PotentialPart g;
        g.catalog = PotentialPart::Catalog::Gaussian;
        g.sigma = 0.5;
        pert.potentials.push_back(g);
        const int M = 96;
        FormMatrix ref;
        const double ts = time_ms([&] { ref = form_matrix(m, pert, M, Exec::Serial); });
        FormMatrix par;
        const double tp = time_ms([&] { par = form_matrix(m, pert, M, Exec::OpenMP); });
        double maxdiff = 0;
        for (std::size_t i = 0; i < ref.entries.size(); ++i)
            maxdiff = std::max(maxdiff, std::abs(ref.entries[i] - par.entries[i]));
        report("form_matrix (gaussian)", ts, tp);
        if (maxdiff != 0.0) std::printf("  WARNING: serial/parallel entries differ by %g\n", maxdiff);
    }

    {
        Model m = Model::neumann(1.0);
        const std::vector<double> mu = m.mu_vector(600);
        const int k_hi = 120;
        EnclosureParams ps{}, pp{};
        const double ts = time_ms(
            [&] { ps = find_enclosure_params(mu, m.gaps(), 0.0, 0.3, k_hi, {}, Exec::Serial); });
        const double tp = time_ms(
            [&] { pp = find_enclosure_params(mu, m.gaps(), 0.0, 0.3, k_hi, {}, Exec::OpenMP); });
        report("enclosure boundary scan", ts, tp);
        if (ps.N != pp.N || ps.h != pp.h) std::printf("  WARNING: serial/parallel params differ\n");
    }

    {
        Model m = Model::neumann(1.0);
        PerturbationSpec pert;
        DeltaSumPart d;
        d.points.push_back({cx{0, 0.3}, 0.0});
        pert.delta_sums.push_back(d);
        FormMatrix fm = form_matrix(m, pert, 300);
        GalerkinResult oracle = galerkin_spectrum(m, fm);
        std::vector<CorrectionRecord> rs, rp;
        const double ts = time_ms(
            [&] { rs = correction_report(m, fm, oracle, 1, 150, nullptr, 0, 0, Exec::Serial); });
        const double tp = time_ms(
            [&] { rp = correction_report(m, fm, oracle, 1, 150, nullptr, 0, 0, Exec::OpenMP); });
        report("correction records", ts, tp);
        double maxdiff = 0;
        for (std::size_t i = 0; i < rs.size(); ++i)
            maxdiff = std::max(maxdiff, std::abs(rs[i].residual2 - rp[i].residual2));
        if (maxdiff != 0.0) std::printf("  WARNING: serial/parallel records differ by %g\n", maxdiff);
    }
    return 0;
}
