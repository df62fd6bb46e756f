#include "iwbl/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iwbl/errors.hpp"

namespace iwbl {

namespace {

constexpr cplx I{0.0, 1.0};

SpectralField2D slice(const Eigen::MatrixXcd& f, int j, const ModeBox& box) {
    SpectralField2D s(box.kx_max, box.ky_max);
    for (int m = 0; m < box.n_modes(); ++m) {
        auto [kx, ky] = box.mode_of(m);
        s.at(kx, ky) = f(j, m);
    }
    return s;
}

Eigen::MatrixXcd scale_modes(const Eigen::MatrixXcd& f, const ModeBox& box,
                             bool x_dir) {
    Eigen::MatrixXcd g(f.rows(), f.cols());
    for (int m = 0; m < box.n_modes(); ++m) {
        auto [kx, ky] = box.mode_of(m);
        g.col(m) = (I * double(x_dir ? kx : ky)) * f.col(m);
    }
    return g;
}

Eigen::MatrixXcd eta_derivative_cols(const Eigen::MatrixXcd& f,
                                     const EtaOps& eta) {
    Eigen::MatrixXcd g(f.rows(), f.cols());
    for (int c = 0; c < f.cols(); ++c)
        g.col(c) = eta.derivative(Eigen::VectorXcd(f.col(c)), 1);
    return g;
}

double sup_abs(const BLState& s) {
    return std::max({s.vx.cwiseAbs().maxCoeff(), s.vy.cwiseAbs().maxCoeff(),
                     s.theta.cwiseAbs().maxCoeff()});
}

// Transport contribution (V+v^o).grad_h f + w^o f_eta per field, plus the
// v.grad_h V coupling, accumulated into the t* matrices with sign `sign`
// (-1 for a tendency, +1 for a residual).
void accumulate_transport(const FrozenTransport& tr, const ModeBox& box,
                          const EtaOps& eta, FourierTransform2D& ft,
                          const Eigen::MatrixXcd& vx, const Eigen::MatrixXcd& vy,
                          const Eigen::MatrixXcd& th, double sign,
                          Eigen::MatrixXcd& tvx, Eigen::MatrixXcd& tvy,
                          Eigen::MatrixXcd& tth) {
    if (tr.trivial) return;
    const int n = eta.n();

    const Eigen::MatrixXcd* fields[3] = {&vx, &vy, &th};
    Eigen::MatrixXcd* out[3] = {&tvx, &tvy, &tth};
    for (int q = 0; q < 3; ++q) {
        Eigen::MatrixXcd dx = scale_modes(*fields[q], box, true);
        Eigen::MatrixXcd dy = scale_modes(*fields[q], box, false);
        Eigen::MatrixXcd de = eta_derivative_cols(*fields[q], eta);
        for (int j = 0; j < n; ++j) {
            PhysField prod = tr.ax[j] * ft.inverse(slice(dx, j, box)) +
                             tr.ay[j] * ft.inverse(slice(dy, j, box)) +
                             tr.wo[j] * ft.inverse(slice(de, j, box));
            SpectralField2D c = ft.forward(prod);
            for (int m = 0; m < box.n_modes(); ++m) {
                auto [kx, ky] = box.mode_of(m);
                (*out[q])(j, m) += sign * c.at(kx, ky);
            }
        }
    }

    if (!tr.has_forcing) return;
    for (int j = 0; j < n; ++j) {
        PhysField vxp = ft.inverse(slice(vx, j, box));
        PhysField vyp = ft.inverse(slice(vy, j, box));
        SpectralField2D cx = ft.forward((vxp * tr.dxVx + vyp * tr.dyVx).eval());
        SpectralField2D cy = ft.forward((vxp * tr.dxVy + vyp * tr.dyVy).eval());
        for (int m = 0; m < box.n_modes(); ++m) {
            auto [kx, ky] = box.mode_of(m);
            tvx(j, m) += sign * cx.at(kx, ky);
            tvy(j, m) += sign * cy.at(kx, ky);
        }
    }
}

}  // namespace

void BLForcing::validate() const {
    if (times.size() != Vx.size() || times.size() != Vy.size())
        throw ConfigError("BLForcing: times/Vx/Vy sample counts differ");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ConfigError("BLForcing: sample times must increase");
    for (size_t i = 0; i < times.size(); ++i)
        if (Vx[i].hermitian_defect() > 1e-12 || Vy[i].hermitian_defect() > 1e-12)
            throw ConfigError("BLForcing: samples violate Hermitian symmetry");
}

void BLForcing::eval(double t, SpectralField2D& vx_out,
                     SpectralField2D& vy_out) const {
    if (zero())
        throw ConfigError("BLForcing::eval called on an empty forcing");
    auto it = std::upper_bound(times.begin(), times.end(), t);
    size_t hi = std::clamp<size_t>(it - times.begin(), 1, times.size() - 1);
    size_t lo = hi - 1;
    double span = times[hi] - times[lo];
    double a = std::clamp((t - times[lo]) / span, 0.0, 1.0);
    vx_out = Vx[lo];
    vy_out = Vy[lo];
    vx_out.raw() = (1.0 - a) * Vx[lo].raw() + a * Vx[hi].raw();
    vy_out.raw() = (1.0 - a) * Vy[lo].raw() + a * Vy[hi].raw();
}

FrozenTransport build_transport(const BLState& vo, const BLForcing& forcing,
                                double t, FourierTransform2D& ft,
                                const EtaOps& eta, double compat_tol) {
    FrozenTransport tr;
    const bool have_vo = !vo.is_zero();
    tr.has_forcing = !forcing.zero();
    tr.trivial = !have_vo && !tr.has_forcing;
    if (tr.trivial) return tr;

    if (have_vo) {
        double sup = sup_abs(vo);
        if (compatibility_defect(vo, eta) > compat_tol * sup)
            throw ConfigError(
                "build_transport: transport field violates the compatibility "
                "integral (derived w^o would not vanish at the lid)");
    }

    const int n = eta.n();
    PhysField Vxp = PhysField::Zero(ft.nx(), ft.ny());
    PhysField Vyp = Vxp;
    if (tr.has_forcing) {
        SpectralField2D Vx, Vy;
        forcing.eval(t, Vx, Vy);
        Vxp = ft.inverse(Vx);
        Vyp = ft.inverse(Vy);
        auto grad = [&](const SpectralField2D& f, bool x_dir) {
            SpectralField2D d = f;
            for (int kx = -f.kx_max(); kx <= f.kx_max(); ++kx)
                for (int ky = -f.ky_max(); ky <= f.ky_max(); ++ky)
                    d.at(kx, ky) = I * double(x_dir ? kx : ky) * f.at(kx, ky);
            return ft.inverse(d);
        };
        tr.dxVx = grad(Vx, true);
        tr.dyVx = grad(Vx, false);
        tr.dxVy = grad(Vy, true);
        tr.dyVy = grad(Vy, false);
    }

    tr.ax.resize(n);
    tr.ay.resize(n);
    tr.wo.resize(n);
    Eigen::MatrixXcd w =
        have_vo ? w_from_v(vo, eta)
                : Eigen::MatrixXcd::Zero(n, vo.box.n_modes()).eval();
    for (int j = 0; j < n; ++j) {
        tr.ax[j] = have_vo ? (ft.inverse(slice(vo.vx, j, vo.box)) + Vxp).eval()
                           : Vxp;
        tr.ay[j] = have_vo ? (ft.inverse(slice(vo.vy, j, vo.box)) + Vyp).eval()
                           : Vyp;
        tr.wo[j] = have_vo ? ft.inverse(slice(w, j, vo.box))
                           : PhysField::Zero(ft.nx(), ft.ny()).eval();
    }
    return tr;
}

void frozen_step(BLState& s, const FrozenTransport& begin,
                 const FrozenTransport& half, const FrozenTransport& end,
                 double dt, FourierTransform2D& ft, const EtaOps& eta) {
    auto rhs = [&](const FrozenTransport& tr, const Eigen::MatrixXcd& vx,
                   const Eigen::MatrixXcd& vy, const Eigen::MatrixXcd& th,
                   Eigen::MatrixXcd& dvx, Eigen::MatrixXcd& dvy,
                   Eigen::MatrixXcd& dth) {
        detail::halfline_rhs(s.box, eta, vx, vy, th, dvx, dvy, dth);
        accumulate_transport(tr, s.box, eta, ft, vx, vy, th, -1.0, dvx, dvy,
                             dth);
        // Mean pressure: keeps the full tendency on the compatibility
        // manifold, so the dynamics (not just the post-step projection)
        // respects the constraint.
        detail::remove_compatibility_rate(s.box, eta, dvx, dvy);
    };

    const Eigen::MatrixXcd vx0 = s.vx, vy0 = s.vy, th0 = s.theta;
    Eigen::MatrixXcd k1x = vx0, k1y = vx0, k1t = vx0;
    Eigen::MatrixXcd k2x = vx0, k2y = vx0, k2t = vx0;
    Eigen::MatrixXcd k3x = vx0, k3y = vx0, k3t = vx0;
    Eigen::MatrixXcd k4x = vx0, k4y = vx0, k4t = vx0;

    rhs(begin, vx0, vy0, th0, k1x, k1y, k1t);
    rhs(half, vx0 + 0.5 * dt * k1x, vy0 + 0.5 * dt * k1y, th0 + 0.5 * dt * k1t,
        k2x, k2y, k2t);
    rhs(half, vx0 + 0.5 * dt * k2x, vy0 + 0.5 * dt * k2y, th0 + 0.5 * dt * k2t,
        k3x, k3y, k3t);
    rhs(end, vx0 + dt * k3x, vy0 + dt * k3y, th0 + dt * k3t, k4x, k4y, k4t);

    const double c = dt / 6.0;
    s.vx = vx0 + c * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    s.vy = vy0 + c * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    s.theta = th0 + c * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
    s.time += dt;
}

void frozen_step(BLState& s, const BLState& vo, const BLForcing& forcing,
                 double dt, FourierTransform2D& ft, const EtaOps& eta) {
    double t = s.time;
    FrozenTransport b = build_transport(vo, forcing, t, ft, eta);
    FrozenTransport h = forcing.zero()
                            ? b
                            : build_transport(vo, forcing, t + 0.5 * dt, ft, eta);
    FrozenTransport e =
        forcing.zero() ? b : build_transport(vo, forcing, t + dt, ft, eta);
    frozen_step(s, b, h, e, dt, ft, eta);
}

namespace {

// Transport state interpolated at time t from trajectory samples around
// step i (4-point window, clamped at the ends; exact at sample times).
BLState interp_state(const Trajectory& prev, int i, double t) {
    const int n = static_cast<int>(prev.states.size());
    const int width = std::min(4, n);
    const int lo = std::clamp(i - 1, 0, n - width);
    Eigen::VectorXd x(width);
    for (int q = 0; q < width; ++q) x(q) = prev.times[lo + q];
    Eigen::VectorXd w = fd_weights(t, x, 0);

    BLState out(prev.states[0].grid);
    out.time = t;
    for (int q = 0; q < width; ++q) {
        out.vx += w(q) * prev.states[lo + q].vx;
        out.vy += w(q) * prev.states[lo + q].vy;
        out.theta += w(q) * prev.states[lo + q].theta;
    }
    return out;
}

}  // namespace

Trajectory solve_frozen(const Trajectory& prev, const BLForcing& forcing,
                        const BLState& init, double T, FourierTransform2D& ft,
                        const EtaOps& eta, const PicardOptions& opt) {
    if (!(T > 0.0)) throw ConfigError("solve_frozen: horizon T must be > 0");
    forcing.validate();
    const double dt0 = opt.dt > 0.0 ? opt.dt : auto_dt(init.grid);
    const int n_steps = std::max(1, int(std::ceil(T / dt0 - 1e-9)));
    const double dt = T / n_steps;

    // tau-window guard: refuse horizons past the schedule's validity
    double M_data = x_norm(init, eta, opt.norms).value;
    TauSchedule sch = tau_schedule(opt.norms.tau, opt.C_d, M_data, opt.norms.d,
                                   T, n_steps);
    if (sch.truncated) {
        std::ostringstream msg;
        msg << "solve_frozen: horizon T = " << T
            << " exceeds the analyticity window (tau reaches tau0/2 at T_max = "
            << sch.T_max << "); shrink T or the data norm (M = " << M_data
            << ")";
        throw ConfigError(msg.str());
    }

    if (!prev.empty()) {
        if (static_cast<int>(prev.states.size()) != n_steps + 1 ||
            std::abs(prev.dt() - dt) > 1e-12 * std::max(1.0, dt))
            throw ConfigError(
                "solve_frozen: transport trajectory not sampled on the solver "
                "grid");
    }

    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    BLState s = init;
    s.time = 0.0;
    traj.times.push_back(0.0);
    traj.states.push_back(s);

    for (int i = 0; i < n_steps; ++i) {
        const double t = i * dt;
        if (prev.empty()) {
            BLState zero(init.grid);
            frozen_step(s, zero, forcing, dt, ft, eta);
        } else {
            FrozenTransport b =
                build_transport(prev.states[i], forcing, t, ft, eta,
                                opt.compat_tol);
            BLState mid = interp_state(prev, i, t + 0.5 * dt);
            FrozenTransport h =
                build_transport(mid, forcing, t + 0.5 * dt, ft, eta,
                                opt.compat_tol);
            FrozenTransport e =
                build_transport(prev.states[i + 1], forcing, t + dt, ft, eta,
                                opt.compat_tol);
            frozen_step(s, b, h, e, dt, ft, eta);
        }
        project_compatibility(s, eta);
        s.enforce_hermitian();
        s.time = (i + 1) * dt;  // uniform grid, immune to += drift
        traj.times.push_back(s.time);
        traj.states.push_back(s);
    }
    return traj;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b,
                           const TauSchedule& schedule, const EtaOps& eta,
                           const NormParams& p) {
    const size_t n = schedule.times.size();
    if (a.states.size() != n || b.states.size() != n)
        throw ConfigError(
            "trajectory_distance: trajectories not sampled on the schedule "
            "grid");
    NormParams q = p;
    double sup_x = 0.0, integral = 0.0, y_prev = 0.0;
    for (size_t i = 0; i < n; ++i) {
        BLState diff = a.states[i];
        diff.vx -= b.states[i].vx;
        diff.vy -= b.states[i].vy;
        diff.theta -= b.states[i].theta;
        q.tau = schedule.samples[i];
        sup_x = std::max(sup_x, x_norm(diff, eta, q).value);
        double y = y_norm(diff, eta, q).value;
        if (i > 0)
            integral += 0.5 * (schedule.times[i] - schedule.times[i - 1]) *
                        (y + y_prev);
        y_prev = y;
    }
    return 0.5 * sup_x + schedule.metric_coefficient() * integral;
}

namespace {

double l2_distance(const Trajectory& a, const Trajectory& b,
                   const EtaOps& eta) {
    double sup = 0.0;
    for (size_t i = 0; i < a.states.size(); ++i) {
        BLState diff = a.states[i];
        diff.vx -= b.states[i].vx;
        diff.vy -= b.states[i].vy;
        diff.theta -= b.states[i].theta;
        sup = std::max(sup, std::sqrt(bl_energy(diff, eta)));
    }
    return sup;
}

}  // namespace

std::pair<Trajectory, ContractionReport> picard_fixed_point(
    const BLState& init, const BLForcing& forcing, double T, double tol,
    FourierTransform2D& ft, const EtaOps& eta, const PicardOptions& opt) {
    ContractionReport rep;

    double M_data = x_norm(init, eta, opt.norms).value;
    const double dt0 = opt.dt > 0.0 ? opt.dt : auto_dt(init.grid);
    const int n_steps = std::max(1, int(std::ceil(T / dt0 - 1e-9)));
    TauSchedule sch = tau_schedule(opt.norms.tau, opt.C_d, M_data, opt.norms.d,
                                   T, n_steps);

    Trajectory prev;  // the zero trajectory, for the first distance
    {
        prev.times.resize(n_steps + 1);
        BLState z(init.grid);
        for (int i = 0; i <= n_steps; ++i) {
            prev.times[i] = T * i / n_steps;
            z.time = prev.times[i];
            prev.states.push_back(z);
        }
    }

    Trajectory cur;
    bool have_cur = false;
    for (int it = 0; it < opt.max_iters; ++it) {
        Trajectory next = solve_frozen(have_cur ? cur : Trajectory{}, forcing,
                                       init, T, ft, eta, opt);
        rep.iterates += 1;
        const Trajectory& base = have_cur ? cur : prev;
        double dist = trajectory_distance(next, base, sch, eta, opt.norms);
        rep.distances.push_back(dist);
        rep.l2_distances.push_back(l2_distance(next, base, eta));
        if (rep.distances.size() >= 2) {
            double prev_d = rep.distances[rep.distances.size() - 2];
            rep.ratios.push_back(prev_d > 0.0 ? dist / prev_d : 0.0);
        }
        cur = std::move(next);
        have_cur = true;

        rep.final_residual = dist;
        if (dist <= tol) {
            rep.converged = true;
            return {std::move(cur), std::move(rep)};
        }
        size_t nd = rep.distances.size();
        if (nd >= 4 && rep.distances[nd - 1] >= rep.distances[nd - 2] &&
            rep.distances[nd - 2] >= rep.distances[nd - 3] &&
            rep.distances[nd - 3] >= rep.distances[nd - 4]) {
            std::ostringstream msg;
            msg << "picard_fixed_point: distances non-decreasing for 3 "
                   "consecutive iterations (T too large or data too rough):";
            for (double d : rep.distances) msg << ' ' << d;
            throw DivergedError(msg.str());
        }
    }
    std::ostringstream msg;
    msg << "picard_fixed_point: no convergence to tol = " << tol << " in "
        << opt.max_iters << " iterations; last distance "
        << rep.final_residual;
    throw DivergedError(msg.str());
}

double ResidualSeries::sup() const {
    double s = 0.0;
    for (double v : v_residual) s = std::max(s, v);
    for (double v : theta_residual) s = std::max(s, v);
    return s;
}

ResidualSeries nonlinear_residual(const Trajectory& traj,
                                  const BLForcing& forcing,
                                  FourierTransform2D& ft, const EtaOps& eta) {
    const int n = static_cast<int>(traj.states.size());
    if (n < 5)
        throw ConfigError(
            "nonlinear_residual: need >= 5 samples for the time stencil");
    const double dt = traj.dt();
    const ModeBox& box = traj.states[0].box;
    const Eigen::VectorXd& w = eta.weights();

    ResidualSeries out;
    for (int i = 2; i + 2 < n; ++i) {
        auto dt4 = [&](auto get) {
            return ((get(traj.states[i - 2]) - get(traj.states[i + 2])) +
                    8.0 * (get(traj.states[i + 1]) - get(traj.states[i - 1]))) /
                   (12.0 * dt);
        };
        Eigen::MatrixXcd rvx = dt4([](const BLState& s) { return s.vx; });
        Eigen::MatrixXcd rvy = dt4([](const BLState& s) { return s.vy; });
        Eigen::MatrixXcd rth = dt4([](const BLState& s) { return s.theta; });

        const BLState& s = traj.states[i];
        FrozenTransport tr = build_transport(s, forcing, traj.times[i], ft,
                                             eta, /*compat_tol=*/1e-6);
        // Assemble the model tendency f: pressure gradient (p = -T*(theta),
        // grad_h p = -i k T*(theta)), transport, vertical advection, and the
        // compatibility mean pressure -- then residual = dt4 - f.
        Eigen::MatrixXcd fvx = Eigen::MatrixXcd::Zero(rvx.rows(), rvx.cols());
        Eigen::MatrixXcd fvy = fvx, fth = fvx;
        accumulate_transport(tr, box, eta, ft, s.vx, s.vy, s.theta, -1.0, fvx,
                             fvy, fth);
        Eigen::MatrixXcd wvert = w_from_v(s, eta);
        for (int m = 0; m < box.n_modes(); ++m) {
            auto [kx, ky] = box.mode_of(m);
            Eigen::VectorXcd tail =
                eta.integral_tail_adjoint(Eigen::VectorXcd(s.theta.col(m)));
            fvx.col(m) += (I * double(kx)) * tail;
            fvy.col(m) += (I * double(ky)) * tail;
            fth.col(m) -= wvert.col(m);
        }
        detail::remove_compatibility_rate(box, eta, fvx, fvy);
        rvx -= fvx;
        rvy -= fvy;
        rth -= fth;

        double v2 = 0.0, t2 = 0.0;
        for (int m = 0; m < box.n_modes(); ++m) {
            v2 += w.dot((rvx.col(m).cwiseAbs2() + rvy.col(m).cwiseAbs2()).eval());
            t2 += w.dot(rth.col(m).cwiseAbs2().eval());
        }
        out.times.push_back(traj.times[i]);
        out.v_residual.push_back(2.0 * M_PI * std::sqrt(v2));
        out.theta_residual.push_back(2.0 * M_PI * std::sqrt(t2));
    }
    return out;
}

}  // namespace iwbl
