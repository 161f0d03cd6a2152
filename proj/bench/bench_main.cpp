// Compares the serial reference grid kernels against the OpenMP paths and
// times the trajectory integrator. Workload sizes mirror the production grids.

#include "qns/grids.hpp"
#include "qns/models.hpp"
#include "qns/sme.hpp"

#include <omp.h>

#include <cstdio>

using namespace qns;

namespace {

template <typename F>
double time_once(F&& fn) {
    const double t0 = omp_get_wtime();
    fn();
    return omp_get_wtime() - t0;
}

void report(const char* name, double serial, double parallel, int workers) {
    std::printf("%-28s serial %8.3f s   omp(%d) %8.3f s   speedup %.2fx\n", name, serial, workers,
                parallel, serial / parallel);
}

} // namespace

int main(int argc, char** argv) {
    int workers = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
    if (workers < 1) workers = 1;
    std::printf("grid kernels, serial reference vs OpenMP (%d threads)\n", workers);

    SpinPairParams zp;
    zp.B = {0.1, 0, 0};
    zp.temperature = 10.0;
    const ModelBundle zno = zno_indium_model(zp);
    const Liouvillian lz = zno.build(0.0);

    {
        const auto ws = linspace(2.5 * 6.2832, 3.5 * 6.2832, 400);
        SpectrumGrid a, b;
        const double ts = time_once([&] { a = eval_s2_grid(lz, ws, 1.0, false, 1); });
        const double tp = time_once([&] { b = eval_s2_grid(lz, ws, 1.0, false, workers); });
        double dev = 0;
        for (size_t i = 0; i < a.values.size(); ++i) dev = std::max(dev, std::abs(a.values[i] - b.values[i]));
        report("s2 grid 400 @ dim 400", ts, tp, workers);
        std::printf("  max |serial - omp| = %.3e\n", dev);
    }
    {
        const auto w1 = linspace(2.6 * 6.2832, 3.4 * 6.2832, 12);
        const auto w2 = w1;
        SpectrumGrid a, b;
        const double ts = time_once([&] { a = eval_s4cut_grid(lz, w1, w2, 1.0, 1); });
        const double tp = time_once([&] { b = eval_s4cut_grid(lz, w1, w2, 1.0, workers); });
        double dev = 0;
        for (size_t i = 0; i < a.values.size(); ++i) dev = std::max(dev, std::abs(a.values[i] - b.values[i]));
        report("s4 cut 12x12 @ dim 400", ts, tp, workers);
        std::printf("  max |serial - omp| = %.3e\n", dev);
    }
    {
        SingleSpinParams sp;
        sp.omega = {1.0, 0, 0};
        sp.gamma = 0.1;
        const ModelBundle m = single_spin_model(sp);
        SimConfig sc;
        sc.dt = 0.02;
        sc.steps = 2'000'000;
        sc.seed = 7;
        sc.beta = 0.1;
        const double t = time_once([&] { (void)simulate(m, sc); });
        std::printf("%-28s %8.3f s  (%.1f Msteps/s)\n", "sme 2e6 steps @ dim 2", t, 2.0 / t);
    }
    return 0;
}
