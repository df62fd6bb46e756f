#include <benchmark/benchmark.h>

#include <iwbl/bulk.hpp>
#include <iwbl/fourier.hpp>
#include <iwbl/init.hpp>
#include <iwbl/nonlinear.hpp>

using namespace iwbl;

namespace {

GridSpec grid(int nxy, int neta = 129) {
    GridSpec g;
    g.Nx = g.Ny = nxy;
    g.Neta = neta;
    return g;
}

void BM_dealiased_product(benchmark::State& state) {
    GridSpec g = grid(static_cast<int>(state.range(0)));
    FourierTransform2D ft(g);
    SpectralField2D a(g.Kx(), g.Ky()), b(g.Kx(), g.Ky());
    for (int kx = -g.Kx(); kx <= g.Kx(); ++kx)
        for (int ky = -g.Ky(); ky <= g.Ky(); ++ky) {
            a.at(kx, ky) = cplx(1.0 / (1 + kx * kx + ky * ky), 0.0);
            b.at(kx, ky) = cplx(0.0, 1.0 / (2 + kx * kx + ky * ky));
        }
    a.at(0, 0) = 1.0;
    b.at(0, 0) = 1.0;
    for (auto _ : state) {
        SpectralField2D p = ft.dealiased_product(a, b);
        benchmark::DoNotOptimize(p.raw().data());
    }
}
BENCHMARK(BM_dealiased_product)->Arg(16)->Arg(32)->Arg(64);

void BM_linear_bl_step(benchmark::State& state) {
    GridSpec g = grid(16, static_cast<int>(state.range(0)));
    EtaOps eta(g);
    InitParams p;
    p.recipe = "bl-poly-exp";
    p.amplitude = 1e-2;
    p.decay = 1.5;
    BLState s = make_bl_init(p, g);
    double dt = auto_dt(g);
    for (auto _ : state) {
        step_linear_bl(s, dt, eta);
        benchmark::DoNotOptimize(s.theta.data());
    }
}
BENCHMARK(BM_linear_bl_step)->Arg(129)->Arg(257)->Arg(513);

void BM_frozen_transport_step(benchmark::State& state) {
    GridSpec g = grid(static_cast<int>(state.range(0)), 129);
    EtaOps eta(g);
    FourierTransform2D ft(g);
    InitParams p;
    p.recipe = "bl-poly-exp";
    p.amplitude = 1e-2;
    p.decay = 1.5;
    BLState s = make_bl_init(p, g);
    BLState vo = s;
    for (auto _ : state) {
        frozen_step(s, vo, BLForcing::none(), 1e-3, ft, eta);
        benchmark::DoNotOptimize(s.theta.data());
    }
}
BENCHMARK(BM_frozen_transport_step)->Arg(8)->Arg(16)->Arg(32);

void BM_bulk_propagator_step(benchmark::State& state) {
    GridSpec g;
    g.Nx = g.Ny = 8;
    g.Nz = static_cast<int>(state.range(0));
    InitParams p;
    p.recipe = "bulk-single-mode";
    p.amplitude = 1e-2;
    BulkState s = make_bulk_init(p, g);
    BulkPropagator prop(g, 0.1, 0.01);
    prop.step(s);  // build and cache the mode exponentials up front
    for (auto _ : state) {
        prop.step(s);
        benchmark::DoNotOptimize(s.w.data());
    }
}
BENCHMARK(BM_bulk_propagator_step)->Arg(65)->Arg(129)->Arg(257);

}  // namespace

BENCHMARK_MAIN();
