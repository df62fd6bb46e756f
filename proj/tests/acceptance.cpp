// Acceptance gate: each numbered criterion runs standalone (argv[1] picks
// one) and prints a single PASS/FAIL line with the measured values and the
// pinned tolerances.  Exit status 0 iff the criterion passes.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include <iwbl/bl.hpp>
#include <iwbl/bulk.hpp>
#include <iwbl/init.hpp>
#include <iwbl/nonlinear.hpp>
#include <iwbl/norms.hpp>

using namespace iwbl;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  (%s)\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    return pass ? 0 : 1;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

GridSpec bulk_grid(int nz) {
    GridSpec g;
    g.Nx = g.Ny = 8;
    g.Nz = nz;
    return g;
}

GridSpec bl_grid(int nxy, int neta, double L = 16.0) {
    GridSpec g;
    g.Nx = g.Ny = nxy;
    g.Neta = neta;
    g.L_eta = L;
    return g;
}

BulkState bulk_init(const GridSpec& g, const std::string& recipe) {
    InitParams p;
    p.recipe = recipe;
    p.amplitude = 1e-2;
    return make_bulk_init(p, g);
}

BLState bl_init(const GridSpec& g) {
    InitParams p;
    p.recipe = "bl-poly-exp";
    p.amplitude = 1e-2;
    p.decay = 1.5;
    return make_bl_init(p, g);
}

// Sup over walls and sample times of the relative deviation between measured
// and closed-form traces, normalized by the running sup of the predicted
// trace magnitude (the predictions cross zero in time).
struct TraceErrors {
    double dzz_w = 0.0, dzz_theta = 0.0;
};

TraceErrors trace_errors(const GridSpec& g, double eps, double T,
                         int n_samples) {
    BulkState s = bulk_init(g, "bulk-single-mode");
    BulkState init = s;
    ZOps z(g.Nz);
    FourierTransform2D ft(g);
    BulkPropagator prop(g, eps, T / n_samples);
    double scale_w = 0.0, scale_th = 0.0, ew = 0.0, eth = 0.0;
    for (int i = 1; i <= n_samples; ++i) {
        prop.step(s);
        TraceReport meas = boundary_trace_diagnostics(s, z, ft);
        TraceReport pred = predicted_traces(init, eps, s.time, z, ft);
        for (int w = 0; w < 2; ++w) {
            scale_w = std::max(scale_w, pred.wall[w].sup_dzz_w);
            scale_th = std::max(scale_th, pred.wall[w].sup_dzz_theta);
            ew = std::max(ew, std::abs(meas.wall[w].sup_dzz_w -
                                       pred.wall[w].sup_dzz_w));
            eth = std::max(eth, std::abs(meas.wall[w].sup_dzz_theta -
                                         pred.wall[w].sup_dzz_theta));
        }
    }
    return {ew / scale_w, eth / scale_th};
}

int criterion1() {
    auto t0 = clock_type::now();
    TraceErrors e = trace_errors(bulk_grid(129), 0.1, 0.5, 20);
    // Refinement convergence: the coarser grid must be strictly worse.
    TraceErrors coarse = trace_errors(bulk_grid(65), 0.1, 0.5, 20);
    double dt = seconds_since(t0);
    bool pass = e.dzz_w <= 1e-3 && e.dzz_theta <= 1e-3 &&
                coarse.dzz_w > e.dzz_w && coarse.dzz_theta > e.dzz_theta &&
                dt <= 30.0;
    return report(1, pass,
                  "rel trace errors at Nz=129: dzz_w " + fmt(e.dzz_w) +
                      ", dzz_theta " + fmt(e.dzz_theta) +
                      " (tol 1e-3; Nz=65 gave " + fmt(coarse.dzz_w) + ", " +
                      fmt(coarse.dzz_theta) + "); " + fmt(dt) + " s (cap 30)");
}

int criterion2() {
    const std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    GridSpec g = bulk_grid(65);
    FourierTransform2D ft(g);
    // Generic data with clean initial traces over the transient window where
    // the secular growth laws hold...
    BulkState gen = bulk_init(g, "bulk-scaling");
    ScalingReport a = scaling_study(gen, eps, 0.5, 80, ft);
    // ...and invariant-family data over a horizon long enough that the sup of
    // its discretization-size trace noise has saturated for every epsilon.
    BulkState inv = bulk_init(g, "bulk-invariant");
    ScalingReport b = scaling_study(inv, eps, 10.0, 80, ft);
    bool pass = std::abs(a.slope_dzz_w + 1.0) <= 0.05 &&
                std::abs(a.slope_dzz_theta + 2.0) <= 0.05 &&
                std::abs(a.slope_dz_v + 1.0) <= 0.05 &&
                std::abs(b.slope_dzz_w) <= 0.05 &&
                std::abs(b.slope_dzz_theta) <= 0.05 &&
                std::abs(b.slope_dz_v) <= 0.05;
    return report(2, pass,
                  "generic slopes " + fmt(a.slope_dzz_w) + "/" +
                      fmt(a.slope_dzz_theta) + "/" + fmt(a.slope_dz_v) +
                      " vs -1/-2/-1; invariant " + fmt(b.slope_dzz_w) + "/" +
                      fmt(b.slope_dzz_theta) + "/" + fmt(b.slope_dz_v) +
                      " vs 0 (tol 0.05)");
}

int criterion3() {
    // Bulk: energy drift and constraint residuals over a 1/eps-stiff run.
    GridSpec gb = bulk_grid(65);
    BulkState sb = bulk_init(gb, "bulk-single-mode");
    ZOps z(gb.Nz);
    BulkPropagator prop(gb, 0.1, 0.01);
    double e0 = bulk_energy(sb, z);
    double div = 0.0;
    for (int i = 0; i < 100; ++i) {
        prop.step(sb);
        div = std::max(div, sb.divergence_defect(z));
    }
    double bulk_drift = std::abs(bulk_energy(sb, z) - e0) / (e0 * sb.time);

    // Boundary layer: half-line energy, lid compatibility.
    GridSpec gl = bl_grid(8, 129);
    EtaOps eta(gl);
    BLState sl = bl_init(gl);
    double dt = auto_dt(gl);
    double el0 = bl_energy(sl, eta);
    double tbl = 0.0;
    for (int i = 0; i < 200; ++i) {
        step_linear_bl(sl, dt, eta);
        tbl += dt;
    }
    double bl_drift = std::abs(bl_energy(sl, eta) - el0) / (el0 * tbl);

    BLState si = bl_init(gl);
    double c0 = compatibility_defect(si, eta);
    double compat = c0;
    for (int i = 0; i < 200; ++i) {
        step_iota_linear(si, dt, eta);
        compat = std::max(compat, compatibility_defect(si, eta));
    }

    bool pass = bulk_drift <= 1e-10 && bl_drift <= 1e-8 && compat <= 1e-10 &&
                div <= 1e-12;
    return report(3, pass,
                  "bulk energy drift " + fmt(bulk_drift) +
                      "/t (tol 1e-10), BL drift " + fmt(bl_drift) +
                      "/t (tol 1e-8), lid compat " + fmt(compat) +
                      " (tol 1e-10), divergence " + fmt(div) + " (tol 1e-12)");
}

int criterion4() {
    GridSpec g = bl_grid(8, 129);
    EtaOps eta(g);
    std::vector<double> dts = {4e-3, 2e-3, 1e-3};
    std::vector<double> resid;
    for (double dt : dts) {
        BLState s = bl_init(g);
        std::vector<BLState> samples;
        std::vector<double> times;
        int n = static_cast<int>(std::lround(0.08 / dt));
        for (int i = 0; i <= n; ++i) {
            samples.push_back(s);
            times.push_back(s.time);
            step_linear_bl(s, dt, eta);
        }
        EnergyIdentityReport rep =
            energy_identity_report(samples, times, 1, eta);
        resid.push_back(rep.sup_residual[0]);
    }
    double o1 = std::log2(resid[0] / resid[1]);
    double o2 = std::log2(resid[1] / resid[2]);
    bool pass = o1 >= 3.0 && o2 >= 3.0;
    return report(4, pass,
                  "identity residuals " + fmt(resid[0]) + "/" + fmt(resid[1]) +
                      "/" + fmt(resid[2]) + ", observed orders " + fmt(o1) +
                      ", " + fmt(o2) + " (need >= 3)");
}

int criterion5() {
    // Restriction-compared lid solutions at t = 1 for doubling truncations.
    const std::vector<double> Ls = {10.0, 20.0, 40.0};
    const int neta0 = 161;
    std::vector<BLState> finals;
    std::vector<GridSpec> grids;
    double dt = 0.0;
    {
        GridSpec gl = bl_grid(8, static_cast<int>((neta0 - 1) * Ls.back() /
                                                  Ls.front()) +
                                     1,
                              Ls.back());
        dt = auto_dt(gl);
    }
    for (double L : Ls) {
        GridSpec g = bl_grid(
            8, static_cast<int>((neta0 - 1) * L / Ls.front()) + 1, L);
        InitParams p;
        p.recipe = "bl-exp";
        p.amplitude = 1e-2;
        p.decay = 1.0;
        BLState s = make_bl_init(p, g);
        EtaOps eta(g);
        project_compatibility(s, eta);
        int n = static_cast<int>(std::lround(1.0 / dt));
        for (int i = 0; i < n; ++i) step_iota_linear(s, dt, eta);
        finals.push_back(s);
        grids.push_back(g);
    }
    std::vector<double> diffs;
    for (size_t i = 0; i + 1 < finals.size(); ++i) {
        // Nested grids: restrict the 2L run to the L nodes and take the
        // weighted L2 norm of the difference over [0, L].
        EtaOps eta(grids[i]);
        const Eigen::VectorXd& w = eta.weights();
        double acc = 0.0;
        for (int m = 0; m < finals[i].box.n_modes(); ++m)
            for (int j = 0; j < grids[i].Neta; ++j)
                acc += w(j) *
                       (std::norm(finals[i].vx(j, m) - finals[i + 1].vx(j, m)) +
                        std::norm(finals[i].vy(j, m) - finals[i + 1].vy(j, m)) +
                        std::norm(finals[i].theta(j, m) -
                                  finals[i + 1].theta(j, m)));
        diffs.push_back(2.0 * M_PI * std::sqrt(acc));
    }
    double factor = diffs[0] / diffs[1];
    bool pass = factor >= 5.0;
    return report(5, pass,
                  "L2 differences " + fmt(diffs[0]) + " (10 vs 20), " +
                      fmt(diffs[1]) + " (20 vs 40); shrink factor " +
                      fmt(factor) + " (need >= 5; the lid correction is "
                      "O(1/L), which caps the factor near 2)");
}

int criterion6() {
    auto t0 = clock_type::now();
    GridSpec g = bl_grid(32, 256);
    EtaOps eta(g);
    FourierTransform2D ft(g);
    BLState s = bl_init(g);
    auto [traj, rep] =
        picard_fixed_point(s, BLForcing::none(), 0.1, 1e-10, ft, eta);
    double max_ratio = 0.0;
    for (double r : rep.ratios) max_ratio = std::max(max_ratio, r);
    ResidualSeries rs = nonlinear_residual(traj, BLForcing::none(), ft, eta);
    double dt = seconds_since(t0);
    bool pass = rep.converged && rep.iterates <= 12 && max_ratio < 0.8 &&
                rs.sup() <= 1e-9 && dt <= 300.0;
    return report(6, pass,
                  std::to_string(rep.iterates) +
                      " iterates (cap 12), max ratio " + fmt(max_ratio) +
                      " (cap 0.8), nonlinear residual " + fmt(rs.sup()) +
                      " (tol 1e-9), " + fmt(dt) + " s (cap 300)");
}

// ---- criterion 7: independent coarse physical-space collocation oracle ----

using Cplx = std::complex<double>;

// Naive direct DFT pair on the collocation grid (no FFT library), standard
// convention f(x_i) = sum_k fhat_k e^{i k . x_i}.
struct NaiveGrid {
    int nx, ny, kxm, kym;

    Eigen::ArrayXXd to_phys(const SpectralField2D& f) const {
        Eigen::ArrayXXd p(nx, ny);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                Cplx acc = 0.0;
                for (int kx = -kxm; kx <= kxm; ++kx)
                    for (int ky = -kym; ky <= kym; ++ky)
                        acc += f.at(kx, ky) *
                               std::exp(Cplx(0.0, 2.0 * M_PI *
                                                      (double(kx) * i / nx +
                                                       double(ky) * j / ny)));
                p(i, j) = acc.real();
            }
        return p;
    }

    Cplx coeff(const Eigen::ArrayXXd& p, int kx, int ky) const {
        Cplx acc = 0.0;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                acc += p(i, j) *
                       std::exp(Cplx(0.0, -2.0 * M_PI *
                                              (double(kx) * i / nx +
                                               double(ky) * j / ny)));
        return acc / double(nx * ny);
    }
};

// Independent single RK4 step of the frozen self-transport system: direct
// DFTs, explicit trapezoid matrices for the integrals (the tail adjoint is
// built as W^{-1} U^T W from its definition), pointwise physical-space
// products, and the compatibility mean pressure.
struct CollocationOracle {
    GridSpec g;
    NaiveGrid ng;
    Eigen::MatrixXd U, Tadj;   // cumulative integral and its W-adjoint
    Eigen::VectorXd w;         // trapezoid weights
    std::vector<Eigen::ArrayXXd> ax, ay, wo;  // frozen transport samples

    explicit CollocationOracle(const GridSpec& grid, const BLState& vo)
        : g(grid), ng{g.Nx, g.Ny, g.Kx(), g.Ky()} {
        const int n = g.Neta;
        const double h = g.deta();
        w = Eigen::VectorXd::Constant(n, h);
        w(0) = w(n - 1) = h / 2.0;
        U = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i < n; ++i) {
            U.row(i) = U.row(i - 1);
            U(i, i - 1) += h / 2.0;
            U(i, i) += h / 2.0;
        }
        Tadj = w.cwiseInverse().asDiagonal() * U.transpose() *
               w.asDiagonal().toDenseMatrix();

        // Frozen transport fields: a = v^o, w^o = -U(i k . v^o), all sampled
        // on the collocation grid once.
        Eigen::MatrixXcd wov(n, vo.box.n_modes());
        for (int m = 0; m < vo.box.n_modes(); ++m) {
            auto [kx, ky] = vo.box.mode_of(m);
            wov.col(m) = -U * (Cplx(0.0, 1.0) *
                               (double(kx) * vo.vx.col(m) +
                                double(ky) * vo.vy.col(m)));
        }
        for (int j = 0; j < n; ++j) {
            ax.push_back(ng.to_phys(slice_modes(vo.vx, vo.box, j)));
            ay.push_back(ng.to_phys(slice_modes(vo.vy, vo.box, j)));
            wo.push_back(ng.to_phys(slice_modes(wov, vo.box, j)));
        }
    }

    static SpectralField2D slice_modes(const Eigen::MatrixXcd& f,
                                       const ModeBox& box, int j) {
        SpectralField2D s(box.kx_max, box.ky_max);
        for (int m = 0; m < box.n_modes(); ++m) {
            auto [kx, ky] = box.mode_of(m);
            s.at(kx, ky) = f(j, m);
        }
        return s;
    }

    // d/deta by the same 4th-order stencils as the solver (an independent
    // re-derivation: weights from the local Vandermonde solve).
    Eigen::VectorXcd deta(const Eigen::VectorXcd& f) const {
        const int n = g.Neta;
        const double h = g.deta();
        Eigen::VectorXcd d(n);
        for (int i = 0; i < n; ++i) {
            int lo = std::min(std::max(i - 2, 0), n - 5);
            Eigen::MatrixXd V(5, 5);
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(5);
            rhs(1) = 1.0;
            for (int c = 0; c < 5; ++c) {
                double x = (lo + c - i) * h;
                double p = 1.0;
                for (int r = 0; r < 5; ++r) {
                    V(r, c) = p;
                    p *= x;
                }
            }
            for (int r = 2; r < 5; ++r) rhs(r) = 0.0;
            Eigen::VectorXd cw = V.lu().solve(rhs);
            Cplx acc = 0.0;
            for (int c = 0; c < 5; ++c) acc += cw(c) * f(lo + c);
            d(i) = acc;
        }
        return d;
    }

    void rhs(const ModeBox& box, const Eigen::MatrixXcd& vx,
             const Eigen::MatrixXcd& vy, const Eigen::MatrixXcd& th,
             Eigen::MatrixXcd& dvx, Eigen::MatrixXcd& dvy,
             Eigen::MatrixXcd& dth) const {
        const int n = g.Neta;
        const int nm = box.n_modes();
        dvx.setZero(n, nm);
        dvy.setZero(n, nm);
        dth.setZero(n, nm);
        // Linear part: v_t = i k T*(theta), theta_t = -w = U(i k . v).
        for (int m = 0; m < nm; ++m) {
            auto [kx, ky] = box.mode_of(m);
            Eigen::VectorXcd tail = Tadj * th.col(m);
            dvx.col(m) = Cplx(0.0, double(kx)) * tail;
            dvy.col(m) = Cplx(0.0, double(ky)) * tail;
            dth.col(m) = U * (Cplx(0.0, 1.0) * (double(kx) * vx.col(m) +
                                                double(ky) * vy.col(m)));
        }
        // Transport: -(a . grad_h f + w^o f_eta), products on the grid.
        const Eigen::MatrixXcd* fields[3] = {&vx, &vy, &th};
        Eigen::MatrixXcd* out[3] = {&dvx, &dvy, &dth};
        for (int q = 0; q < 3; ++q) {
            Eigen::MatrixXcd gx(n, nm), gy(n, nm), ge(n, nm);
            for (int m = 0; m < nm; ++m) {
                auto [kx, ky] = box.mode_of(m);
                gx.col(m) = Cplx(0.0, double(kx)) * fields[q]->col(m);
                gy.col(m) = Cplx(0.0, double(ky)) * fields[q]->col(m);
                ge.col(m) = deta(fields[q]->col(m));
            }
            for (int j = 0; j < n; ++j) {
                Eigen::ArrayXXd prod =
                    ax[j] * ng.to_phys(slice_modes(gx, box, j)) +
                    ay[j] * ng.to_phys(slice_modes(gy, box, j)) +
                    wo[j] * ng.to_phys(slice_modes(ge, box, j));
                for (int m = 0; m < nm; ++m) {
                    auto [kx, ky] = box.mode_of(m);
                    (*out[q])(j, m) -= ng.coeff(prod, kx, ky);
                }
            }
        }
        // Compatibility mean pressure.
        for (int m = 0; m < nm; ++m) {
            auto [kx, ky] = box.mode_of(m);
            double k2 = double(kx) * kx + double(ky) * ky;
            if (k2 == 0.0) continue;
            Eigen::VectorXcd wc = w.cast<Cplx>();
            Cplx c_rate = Cplx(0.0, 1.0) * (double(kx) * wc.dot(dvx.col(m)) +
                                            double(ky) * wc.dot(dvy.col(m)));
            Cplx beta = c_rate / (Cplx(0.0, 1.0) * k2 * g.L_eta);
            dvx.col(m).array() -= double(kx) * beta;
            dvy.col(m).array() -= double(ky) * beta;
        }
    }

    void step(BLState& s, double dt) const {
        Eigen::MatrixXcd k1x, k1y, k1t, k2x, k2y, k2t, k3x, k3y, k3t, k4x,
            k4y, k4t;
        const Eigen::MatrixXcd vx0 = s.vx, vy0 = s.vy, th0 = s.theta;
        rhs(s.box, vx0, vy0, th0, k1x, k1y, k1t);
        rhs(s.box, vx0 + 0.5 * dt * k1x, vy0 + 0.5 * dt * k1y,
            th0 + 0.5 * dt * k1t, k2x, k2y, k2t);
        rhs(s.box, vx0 + 0.5 * dt * k2x, vy0 + 0.5 * dt * k2y,
            th0 + 0.5 * dt * k2t, k3x, k3y, k3t);
        rhs(s.box, vx0 + dt * k3x, vy0 + dt * k3y, th0 + dt * k3t, k4x, k4y,
            k4t);
        const double c = dt / 6.0;
        s.vx = vx0 + c * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        s.vy = vy0 + c * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        s.theta = th0 + c * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
        s.time += dt;
    }
};

int criterion7() {
    GridSpec g = bl_grid(8, 33);
    EtaOps eta(g);
    FourierTransform2D ft(g);
    BLState s = bl_init(g);
    BLState vo = s;
    const double dt = 5e-3;

    BLState solver = s;
    frozen_step(solver, vo, BLForcing::none(), dt, ft, eta);

    CollocationOracle oracle(g, vo);
    BLState ref = s;
    oracle.step(ref, dt);

    double scale = std::max({ref.vx.cwiseAbs().maxCoeff(),
                             ref.vy.cwiseAbs().maxCoeff(),
                             ref.theta.cwiseAbs().maxCoeff()});
    double diff = std::max({(solver.vx - ref.vx).cwiseAbs().maxCoeff(),
                            (solver.vy - ref.vy).cwiseAbs().maxCoeff(),
                            (solver.theta - ref.theta).cwiseAbs().maxCoeff()});
    double rel = diff / scale;
    bool pass = rel <= 1e-4;
    return report(7, pass,
                  "frozen step vs independent collocation oracle: relative "
                  "difference " +
                      fmt(rel) + " (tol 1e-4)");
}

int criterion8() {
    auto t0 = clock_type::now();
    std::vector<InequalityScan> scans = verify_inequalities(200, 2.0);
    std::vector<InequalityScan> extra = {scan_inequality(1, 200, 1.0),
                                         scan_inequality(2, 200, 1.0)};
    scans.insert(scans.end(), extra.begin(), extra.end());
    double dt = seconds_since(t0);
    bool pass = dt <= 10.0;
    std::string sups;
    for (const InequalityScan& sc : scans) {
        pass = pass && std::isfinite(sc.sup) && sc.plateau;
        sups += (sups.empty() ? "" : ", ") + fmt(sc.sup);
    }
    return report(8, pass,
                  "sups " + sups + " (all finite, plateau 100 vs 200); " +
                      fmt(dt) + " s (cap 10)");
}

int criterion9() {
    // Exact linear schedule at zero data norm.
    TauSchedule lin = tau_schedule(1.6, 0.02, 0.0, 0.5, 0.3);
    double lin_err = 0.0;
    for (size_t i = 0; i < lin.times.size(); ++i)
        lin_err = std::max(lin_err, std::abs(lin.samples[i] -
                                             (1.6 - lin.times[i] / 0.5)));
    // Generic schedule: strict decrease, tau(T_max) = tau0/2.
    TauSchedule gen = tau_schedule(1.6, 0.02, 5.0, 0.5, 10.0);
    bool decreasing = gen.truncated;
    for (size_t i = 1; i < gen.samples.size(); ++i)
        decreasing = decreasing && gen.samples[i] < gen.samples[i - 1];
    TauSchedule at_max = tau_schedule(1.6, 0.02, 5.0, 0.5, gen.T_max);
    double half_err = std::abs(at_max.samples.back() - 0.8);
    bool pass = lin_err <= 1e-12 && decreasing && half_err <= 1e-8;
    return report(9, pass,
                  "linear schedule error " + fmt(lin_err) +
                      " (tol 1e-12); tau(T_max) - tau0/2 = " + fmt(half_err) +
                      " (tol 1e-8), strictly decreasing: " +
                      (decreasing ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
    int which = argc > 1 ? std::atoi(argv[1]) : 0;
    int (*criteria[])() = {criterion1, criterion2, criterion3,
                           criterion4, criterion5, criterion6,
                           criterion7, criterion8, criterion9};
    if (which >= 1 && which <= 9) return criteria[which - 1]();
    int rc = 0;
    for (int i = 0; i < 9; ++i) rc |= criteria[i]();
    return rc;
}
