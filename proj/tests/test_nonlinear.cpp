#include <doctest.h>

#include <iwbl/errors.hpp>
#include <iwbl/init.hpp>
#include <iwbl/nonlinear.hpp>

#include <cmath>

using namespace iwbl;

namespace {

GridSpec nl_grid(int neta = 65) {
    GridSpec g;
    g.Nx = g.Ny = 8;
    g.Neta = neta;
    g.L_eta = 16.0;
    return g;
}

BLState nl_init(const GridSpec& g, double amp = 1e-2) {
    InitParams p;
    p.recipe = "bl-poly-exp";
    p.amplitude = amp;
    p.decay = 1.5;
    return make_bl_init(p, g);
}

}  // namespace

TEST_SUITE("nonlinear") {

TEST_CASE("forcing validation rejects inconsistent samples") {
    GridSpec g = nl_grid();
    BLForcing f;
    f.times = {0.0, 0.1};
    f.Vx = {SpectralField2D(g.Kx(), g.Ky())};
    f.Vy = f.Vx;
    CHECK_THROWS_AS(f.validate(), ConfigError);
    f.Vx.push_back(SpectralField2D(g.Kx(), g.Ky()));
    f.Vy.push_back(SpectralField2D(g.Kx(), g.Ky()));
    CHECK_NOTHROW(f.validate());
    f.times = {0.1, 0.1};
    CHECK_THROWS_AS(f.validate(), ConfigError);
}

TEST_CASE("frozen step stays on the compatibility manifold by itself") {
    GridSpec g = nl_grid();
    EtaOps eta(g);
    FourierTransform2D ft(g);
    BLState s = nl_init(g);
    BLState vo = s;
    for (int i = 0; i < 20; ++i)
        frozen_step(s, vo, BLForcing::none(), 2e-3, ft, eta);
    CHECK(compatibility_defect(s, eta) < 1e-14);
}

TEST_CASE("transport from an incompatible field is refused") {
    GridSpec g = nl_grid();
    EtaOps eta(g);
    FourierTransform2D ft(g);
    BLState vo(g);
    int m = vo.box.flat(1, 0);
    for (int j = 0; j < g.Neta; ++j)
        vo.vx(j, m) = 0.01 * std::exp(-eta.node(j));
    vo.vx.col(vo.box.flat(-1, 0)) = vo.vx.col(m).conjugate();
    CHECK_THROWS_AS(build_transport(vo, BLForcing::none(), 0.0, ft, eta, 1e-8),
                    ConfigError);
}

TEST_CASE("solve_frozen refuses horizons beyond the analyticity window") {
    GridSpec g = nl_grid();
    EtaOps eta(g);
    FourierTransform2D ft(g);
    BLState s = nl_init(g);
    CHECK_THROWS_AS(
        solve_frozen(Trajectory{}, BLForcing::none(), s, 5.0, ft, eta),
        ConfigError);
}

TEST_CASE("picard contracts and its fixed point solves the nonlinear system") {
    GridSpec g = nl_grid();
    EtaOps eta(g);
    FourierTransform2D ft(g);
    BLState s = nl_init(g);
    auto [traj, rep] =
        picard_fixed_point(s, BLForcing::none(), 0.1, 1e-10, ft, eta);
    CHECK(rep.converged);
    CHECK(rep.iterates <= 12);
    for (double r : rep.ratios) CHECK(r < 0.8);
    ResidualSeries rs = nonlinear_residual(traj, BLForcing::none(), ft, eta);
    CHECK(rs.sup() < 1e-9);
}

TEST_CASE("trajectory distance vanishes only on identical trajectories") {
    GridSpec g = nl_grid();
    EtaOps eta(g);
    FourierTransform2D ft(g);
    BLState s = nl_init(g);
    PicardOptions opt;
    opt.dt = 0.01;
    Trajectory a =
        solve_frozen(Trajectory{}, BLForcing::none(), s, 0.05, ft, eta, opt);
    TauSchedule sch = tau_schedule(opt.norms.tau, opt.C_d, 1.0, opt.norms.d,
                                   0.05, 5);  // schedule grid = solver grid
    CHECK(trajectory_distance(a, a, sch, eta, opt.norms) == 0.0);
    Trajectory b = a;
    b.states.back().theta *= 1.001;
    CHECK(trajectory_distance(a, b, sch, eta, opt.norms) > 0.0);
}

TEST_CASE("residual evaluation needs at least five samples") {
    GridSpec g = nl_grid();
    EtaOps eta(g);
    FourierTransform2D ft(g);
    BLState s = nl_init(g);
    Trajectory t;
    t.times = {0.0, 0.01};
    t.states = {s, s};
    CHECK_THROWS_AS(nonlinear_residual(t, BLForcing::none(), ft, eta),
                    ConfigError);
}

}  // TEST_SUITE
