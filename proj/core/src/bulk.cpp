/// @file bulk.cpp
#include "iwbl/bulk.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "iwbl/errors.hpp"
#include "iwbl/eta_ops.hpp"  // fd_weights

namespace iwbl {

void BulkState::enforce_hermitian() {
    for (int kx = -box.kx_max; kx <= box.kx_max; ++kx)
        for (int ky = -box.ky_max; ky <= box.ky_max; ++ky) {
            if (!box.canonical(kx, ky)) continue;
            int a = box.flat(kx, ky), b = box.flat(-kx, -ky);
            for (Eigen::MatrixXcd* m : {&vx, &vy, &w, &theta}) {
                if (a == b) {
                    m->col(a) = m->col(a).real().template cast<cplx>();
                } else {
                    Eigen::VectorXcd avg = 0.5 * (m->col(a) + m->col(b).conjugate());
                    m->col(a) = avg;
                    m->col(b) = avg.conjugate();
                }
            }
        }
}

double BulkState::divergence_defect(const ZOps& z) const {
    double worst = 0.0;
    for (int m = 0; m < box.n_modes(); ++m) {
        auto [kx, ky] = box.mode_of(m);
        Eigen::VectorXcd div = cplx(0, 1) * (double(kx) * vx.col(m) + double(ky) * vy.col(m)) +
                               z.D() * w.col(m);
        worst = std::max(worst, div.cwiseAbs().maxCoeff());
    }
    return worst;
}

double BulkState::impermeability_defect() const {
    return std::max(w.row(0).cwiseAbs().maxCoeff(), w.row(w.rows() - 1).cwiseAbs().maxCoeff());
}

double bulk_energy(const BulkState& s, const ZOps& z) {
    double e = 0.0;
    const auto& hd = z.Hdiag();
    for (const Eigen::MatrixXcd* m : {&s.vx, &s.vy, &s.w, &s.theta})
        e += (hd.asDiagonal() * m->cwiseAbs2().matrix()).sum();
    return 4.0 * M_PI * M_PI * e;
}

Eigen::VectorXcd solve_pressure_mode(const Eigen::VectorXcd& theta, double k2, const ZOps& z) {
    const int n = z.n();
    const double h = z.h();

    // 4th-order second-derivative rows (6-point windows clamped to the grid)
    // and 4th-order first-derivative RHS (5-point windows).
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXcd rhs(n);
    auto window = [&](int j, int width) { return std::clamp(j - width / 2, 0, n - width); };
    for (int j = 1; j < n - 1; ++j) {
        int f2 = window(j, 6);
        Eigen::VectorXd x2(6);
        for (int s = 0; s < 6; ++s) x2(s) = (f2 + s) * h;
        Eigen::VectorXd w2 = fd_weights(j * h, x2, 2);
        for (int s = 0; s < 6; ++s) A(j, f2 + s) += w2(s);
        A(j, j) -= k2;

        int f1 = window(j, 5);
        Eigen::VectorXd x1(5);
        for (int s = 0; s < 5; ++s) x1(s) = (f1 + s) * h;
        Eigen::VectorXd w1 = fd_weights(j * h, x1, 1);
        cplx d1(0, 0);
        for (int s = 0; s < 5; ++s) d1 += w1(s) * theta(f1 + s);
        rhs(j) = d1;
    }
    // Neumann rows: 4th-order one-sided first derivative = theta at the wall.
    {
        Eigen::VectorXd x(5);
        for (int s = 0; s < 5; ++s) x(s) = s * h;
        Eigen::VectorXd w0 = fd_weights(0.0, x, 1);
        for (int s = 0; s < 5; ++s) {
            A(0, s) = w0(s);
            A(n - 1, n - 1 - s) = -w0(s);
        }
        rhs(0) = theta(0);
        rhs(n - 1) = theta(n - 1);
    }

    if (k2 > 0) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        return lu.solve(rhs.real().eval()).cast<cplx>() +
               cplx(0, 1) * lu.solve(rhs.imag().eval()).cast<cplx>();
    }
    // k = 0: Neumann problem is defined up to a constant; gauge to zero
    // SBP-weighted vertical mean via a bordered system.
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n + 1, n + 1);
    B.topLeftCorner(n, n) = A;
    B.block(0, n, n, 1) = z.Hdiag();
    B.block(n, 0, 1, n) = z.Hdiag().transpose();
    Eigen::VectorXcd r2 = Eigen::VectorXcd::Zero(n + 1);
    r2.head(n) = rhs;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Eigen::VectorXcd sol = lu.solve(r2.real().eval()).cast<cplx>() +
                           cplx(0, 1) * lu.solve(r2.imag().eval()).cast<cplx>();
    return sol.head(n);
}

Eigen::MatrixXcd solve_pressure(const BulkState& s, const ZOps& z) {
    Eigen::MatrixXcd p(s.theta.rows(), s.theta.cols());
    for (int m = 0; m < s.box.n_modes(); ++m) {
        auto [kx, ky] = s.box.mode_of(m);
        p.col(m) = solve_pressure_mode(s.theta.col(m), double(kx * kx + ky * ky), z);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Propagator
// ---------------------------------------------------------------------------

BulkPropagator::BulkPropagator(const GridSpec& grid, double eps, double dt)
    : grid_(grid), z_(grid.Nz), eps_(eps), dt_(dt) {
    if (!(eps > 0)) throw ConfigError("BulkPropagator: eps must be positive");
    if (!(dt > 0)) throw ConfigError("BulkPropagator: dt must be positive");
}

Eigen::MatrixXd BulkPropagator::wall_operator(double k2) const {
    // K = (A + k2 W)^{-1} k2 W on the interior nodes, where A is the interior
    // block of D^T H D (the quadratic form of |w'|^2) and W the interior
    // quadrature weights.  K discretizes k^2 (k^2 - dzz)^{-1} with Dirichlet
    // walls: it is self-adjoint positive in W, and the pair
    //   w_s = K theta|_int,  theta_s = -w
    // conserves  w^T(W + A/k2)w + theta^T H theta  identically -- the
    // discrete rendering of |w|^2 + |v_parallel|^2 + |theta|^2, since
    // w^T A w = |Dw|_H^2 = k2 |v_par|_H^2 under the divergence constraint.
    const int n = z_.n();
    const int ni = n - 2;
    Eigen::MatrixXd Afull = z_.D().transpose() * z_.Hdiag().asDiagonal() * z_.D();
    Eigen::MatrixXd A = Afull.block(1, 1, ni, ni);
    Eigen::MatrixXd kW = k2 * z_.Hdiag().segment(1, ni).asDiagonal();
    return (A + kW).ldlt().solve(kW);
}

Eigen::MatrixXd BulkPropagator::projection_pressure_matrix(int kx, int ky) const {
    const double k2 = double(kx * kx + ky * ky);
    if (k2 <= 0)
        throw ConfigError("projection_pressure_matrix: requires a nonzero mode");
    // Implicit pressure of the wall operator: from w_s = K theta and the
    // divergence constraint, |k|^2 p = -D w_s, so p = -(1/k2) D Pad K Sel.
    const int n = z_.n();
    const int ni = n - 2;
    Eigen::MatrixXd pad = Eigen::MatrixXd::Zero(n, ni);
    pad.block(1, 0, ni, ni).setIdentity();
    return -(1.0 / k2) * z_.D() * pad * wall_operator(k2) * pad.transpose();
}

const BulkPropagator::ModeOp& BulkPropagator::op(int k2) {
    auto it = cache_.find(k2);
    if (it != cache_.end()) return it->second;

    const int n = z_.n();
    const int ni = n - 2;
    // Real block generator for [w_int; theta] in fast time s = t/eps.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ni + n, ni + n);
    M.block(0, ni + 1, ni, ni) = wall_operator(double(k2));
    M.block(ni + 1, 0, ni, ni) = -Eigen::MatrixXd::Identity(ni, ni);
    ModeOp mo;
    mo.E = (M * (dt_ / eps_)).exp();
    return cache_.emplace(k2, std::move(mo)).first->second;
}

void BulkPropagator::step(BulkState& s) {
    if (s.grid.Nz != grid_.Nz || s.box.kx_max != grid_.Kx() || s.box.ky_max != grid_.Ky())
        throw ConfigError("BulkPropagator: state grid does not match propagator grid");
    const int n = z_.n();
    const int ni = n - 2;
    for (int kx = -s.box.kx_max; kx <= s.box.kx_max; ++kx)
        for (int ky = -s.box.ky_max; ky <= s.box.ky_max; ++ky) {
            if (!s.box.canonical(kx, ky)) continue;
            if (kx == 0 && ky == 0) continue;  // k = 0: v, theta frozen, w = 0
            int m = s.box.flat(kx, ky);
            int mm = s.box.flat(-kx, -ky);
            double amp = s.vx.col(m).norm() + s.vy.col(m).norm() + s.w.col(m).norm() +
                         s.theta.col(m).norm();
            if (amp == 0.0) continue;
            const ModeOp& o = op(kx * kx + ky * ky);
            Eigen::VectorXcd u(ni + n);
            u.head(ni) = s.w.col(m).segment(1, ni);
            u.tail(n) = s.theta.col(m);
            Eigen::VectorXcd unew = o.E * u;
            Eigen::VectorXcd dw_old = z_.D() * s.w.col(m);
            s.w.col(m).segment(1, ni) = unew.head(ni);
            s.w(0, m) = s.w(n - 1, m) = 0.0;  // walls pinned by construction
            s.theta.col(m) = unew.tail(n);
            // v update along k from the divergence constraint, so the defect
            // i k . v + D w is preserved to round-off (equivalent to the
            // exact pressure-work integral).
            const double k2 = double(kx * kx + ky * ky);
            Eigen::VectorXcd gamma =
                cplx(0, 1) / k2 * (z_.D() * s.w.col(m) - dw_old);
            s.vx.col(m) += double(kx) * gamma;
            s.vy.col(m) += double(ky) * gamma;
            // Hermitian mirror.
            s.vx.col(mm) = s.vx.col(m).conjugate();
            s.vy.col(mm) = s.vy.col(m).conjugate();
            s.w.col(mm) = s.w.col(m).conjugate();
            s.theta.col(mm) = s.theta.col(m).conjugate();
        }
    s.time += dt_;
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

static void finalize_sups(WallTraces& wt, FourierTransform2D& ft) {
    wt.sup_dzz_w = ft.inverse(wt.dzz_w).abs().maxCoeff();
    wt.sup_dzz_theta = ft.inverse(wt.dzz_theta).abs().maxCoeff();
    wt.sup_dz_v = std::max(ft.inverse(wt.dz_vx).abs().maxCoeff(),
                           ft.inverse(wt.dz_vy).abs().maxCoeff());
    wt.sup_lap_theta = ft.inverse(wt.lap_theta).abs().maxCoeff();
}

TraceReport boundary_trace_diagnostics(const BulkState& s, const ZOps& z,
                                       FourierTransform2D& ft) {
    TraceReport r;
    for (int wall = 0; wall < 2; ++wall) {
        WallTraces wt{SpectralField2D(s.box.kx_max, s.box.ky_max),
                      SpectralField2D(s.box.kx_max, s.box.ky_max),
                      SpectralField2D(s.box.kx_max, s.box.ky_max),
                      SpectralField2D(s.box.kx_max, s.box.ky_max),
                      SpectralField2D(s.box.kx_max, s.box.ky_max)};
        const int zrow = wall == 0 ? 0 : z.n() - 1;
        for (int m = 0; m < s.box.n_modes(); ++m) {
            auto [kx, ky] = s.box.mode_of(m);
            const double k2 = double(kx * kx + ky * ky);
            wt.dzz_w.at(kx, ky) = z.wall_d2(Eigen::VectorXcd(s.w.col(m)), wall);
            wt.dzz_theta.at(kx, ky) = z.wall_d2(Eigen::VectorXcd(s.theta.col(m)), wall);
            wt.dz_vx.at(kx, ky) = z.wall_d1(Eigen::VectorXcd(s.vx.col(m)), wall);
            wt.dz_vy.at(kx, ky) = z.wall_d1(Eigen::VectorXcd(s.vy.col(m)), wall);
            wt.lap_theta.at(kx, ky) = -k2 * s.theta(zrow, m);
        }
        finalize_sups(wt, ft);
        r.wall[wall] = std::move(wt);
    }
    return r;
}

TraceReport predicted_traces(const BulkState& init, double eps, double t, const ZOps& z,
                             FourierTransform2D& ft) {
    TraceReport r0 = boundary_trace_diagnostics(init, z, ft);
    TraceReport r;
    const double a = t / eps;
    for (int wall = 0; wall < 2; ++wall) {
        const WallTraces& w0 = r0.wall[wall];
        WallTraces wt = w0;  // copies initial traces and boxes
        const int zrow = wall == 0 ? 0 : z.n() - 1;
        for (int m = 0; m < init.box.n_modes(); ++m) {
            auto [kx, ky] = init.box.mode_of(m);
            cplx lap = w0.lap_theta.at(kx, ky);
            cplx th_wall = init.theta(zrow, m);
            wt.dzz_w.at(kx, ky) = w0.dzz_w.at(kx, ky) + a * lap;
            wt.dzz_theta.at(kx, ky) =
                w0.dzz_theta.at(kx, ky) - a * w0.dzz_w.at(kx, ky) - 0.5 * a * a * lap;
            wt.dz_vx.at(kx, ky) = w0.dz_vx.at(kx, ky) - a * cplx(0, double(kx)) * th_wall;
            wt.dz_vy.at(kx, ky) = w0.dz_vy.at(kx, ky) - a * cplx(0, double(ky)) * th_wall;
            wt.lap_theta.at(kx, ky) = lap;
        }
        finalize_sups(wt, ft);
        r.wall[wall] = std::move(wt);
    }
    return r;
}

ScalingReport scaling_study(const BulkState& init, const std::vector<double>& eps_list, double T,
                            int n_samples, FourierTransform2D& ft) {
    if (eps_list.size() < 3)
        throw ConfigError("scaling_study: need at least three epsilon values for a slope fit");
    ScalingReport rep;
    rep.eps = eps_list;
    ZOps z(init.grid.Nz);
    const double dt = T / n_samples;
    for (double eps : eps_list) {
        BulkPropagator prop(init.grid, eps, dt);
        BulkState s = init;
        double sw = 0, st = 0, sv = 0;
        for (int i = 0; i < n_samples; ++i) {
            prop.step(s);
            TraceReport tr = boundary_trace_diagnostics(s, z, ft);
            for (int wall = 0; wall < 2; ++wall) {
                sw = std::max(sw, tr.wall[wall].sup_dzz_w);
                st = std::max(st, tr.wall[wall].sup_dzz_theta);
                sv = std::max(sv, tr.wall[wall].sup_dz_v);
            }
        }
        rep.sup_dzz_w.push_back(sw);
        rep.sup_dzz_theta.push_back(st);
        rep.sup_dz_v.push_back(sv);
    }
    auto slope = [&](const std::vector<double>& v) {
        // least-squares slope of log(v) against log(eps)
        const int n = static_cast<int>(v.size());
        double mx = 0, my = 0;
        for (int i = 0; i < n; ++i) {
            mx += std::log(eps_list[i]);
            my += std::log(std::max(v[i], 1e-300));
        }
        mx /= n; my /= n;
        double num = 0, den = 0;
        for (int i = 0; i < n; ++i) {
            double dx = std::log(eps_list[i]) - mx;
            num += dx * (std::log(std::max(v[i], 1e-300)) - my);
            den += dx * dx;
        }
        return num / den;
    };
    rep.slope_dzz_w = slope(rep.sup_dzz_w);
    rep.slope_dzz_theta = slope(rep.sup_dzz_theta);
    rep.slope_dz_v = slope(rep.sup_dz_v);
    return rep;
}

}  // namespace iwbl
