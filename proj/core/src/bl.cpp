#include "iwbl/bl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iwbl/errors.hpp"

namespace iwbl {

namespace {

constexpr cplx I{0.0, 1.0};

double sup_abs(const BLState& s) {
    return std::max({s.vx.cwiseAbs().maxCoeff(), s.vy.cwiseAbs().maxCoeff(),
                     s.theta.cwiseAbs().maxCoeff()});
}

// Right-hand side of either linear system.  `lid` selects the mean-pressure
// (lid) form; otherwise the adjoint-tail half-line form.
struct LinearRhs {
    const ModeBox& box;
    const EtaOps& eta;
    bool lid;

    void operator()(const Eigen::MatrixXcd& vx, const Eigen::MatrixXcd& vy,
                    const Eigen::MatrixXcd& th, Eigen::MatrixXcd& dvx,
                    Eigen::MatrixXcd& dvy, Eigen::MatrixXcd& dth) const {
        if (!lid) {
            detail::halfline_rhs(box, eta, vx, vy, th, dvx, dvy, dth);
            return;
        }
        const int nm = box.n_modes();
        for (int m = 0; m < nm; ++m) {
            auto [kx, ky] = box.mode_of(m);
            if (kx == 0 && ky == 0) {
                // frozen mode: w_0 = 0 by compatibility, no pressure gradient
                dvx.col(m).setZero();
                dvy.col(m).setZero();
                dth.col(m).setZero();
                continue;
            }
            Eigen::VectorXcd phi =
                I * (double(kx) * vx.col(m) + double(ky) * vy.col(m));
            dth.col(m) = eta.integral_up(phi);
            Eigen::VectorXcd up = eta.integral_up(Eigen::VectorXcd(th.col(m)));
            cplx pi = -eta.integrate(up) / eta.length();
            Eigen::VectorXcd grad = up.array() + pi;
            dvx.col(m) = (-I * double(kx)) * grad;
            dvy.col(m) = (-I * double(ky)) * grad;
        }
    }
};

void rk4_step(BLState& s, double dt, const LinearRhs& rhs) {
    const Eigen::MatrixXcd vx0 = s.vx, vy0 = s.vy, th0 = s.theta;
    Eigen::MatrixXcd k1x = vx0, k1y = vx0, k1t = vx0;  // sized like the state
    Eigen::MatrixXcd k2x = vx0, k2y = vx0, k2t = vx0;
    Eigen::MatrixXcd k3x = vx0, k3y = vx0, k3t = vx0;
    Eigen::MatrixXcd k4x = vx0, k4y = vx0, k4t = vx0;

    rhs(vx0, vy0, th0, k1x, k1y, k1t);
    rhs(vx0 + 0.5 * dt * k1x, vy0 + 0.5 * dt * k1y, th0 + 0.5 * dt * k1t,
        k2x, k2y, k2t);
    rhs(vx0 + 0.5 * dt * k2x, vy0 + 0.5 * dt * k2y, th0 + 0.5 * dt * k2t,
        k3x, k3y, k3t);
    rhs(vx0 + dt * k3x, vy0 + dt * k3y, th0 + dt * k3t, k4x, k4y, k4t);

    const double c = dt / 6.0;
    s.vx = vx0 + c * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    s.vy = vy0 + c * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    s.theta = th0 + c * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
    s.time += dt;
}

}  // namespace

namespace detail {

void halfline_rhs(const ModeBox& box, const EtaOps& eta,
                  const Eigen::MatrixXcd& vx, const Eigen::MatrixXcd& vy,
                  const Eigen::MatrixXcd& theta, Eigen::MatrixXcd& dvx,
                  Eigen::MatrixXcd& dvy, Eigen::MatrixXcd& dtheta) {
    for (int m = 0; m < box.n_modes(); ++m) {
        auto [kx, ky] = box.mode_of(m);
        if (kx == 0 && ky == 0) {
            // frozen mode: w_0 = 0 by compatibility, no pressure gradient
            dvx.col(m).setZero();
            dvy.col(m).setZero();
            dtheta.col(m).setZero();
            continue;
        }
        Eigen::VectorXcd phi =
            I * (double(kx) * vx.col(m) + double(ky) * vy.col(m));
        dtheta.col(m) = eta.integral_up(phi);
        Eigen::VectorXcd tail =
            eta.integral_tail_adjoint(Eigen::VectorXcd(theta.col(m)));
        dvx.col(m) = (I * double(kx)) * tail;
        dvy.col(m) = (I * double(ky)) * tail;
    }
}

}  // namespace detail

void BLState::enforce_hermitian() {
    for (int kx = 0; kx <= box.kx_max; ++kx)
        for (int ky = -box.ky_max; ky <= box.ky_max; ++ky) {
            if (!box.canonical(kx, ky)) continue;
            int m = box.flat(kx, ky), mc = box.flat(-kx, -ky);
            for (Eigen::MatrixXcd* f : {&vx, &vy, &theta}) {
                if (m == mc) {
                    f->col(m) = f->col(m).real().cast<cplx>();
                } else {
                    Eigen::VectorXcd avg =
                        0.5 * (f->col(m) + f->col(mc).conjugate());
                    f->col(m) = avg;
                    f->col(mc) = avg.conjugate();
                }
            }
        }
}

double auto_dt(const GridSpec& g, double c) {
    double kmax = std::hypot(double(g.Kx()), double(g.Ky()));
    return c / (std::max(kmax, 1.0) * std::max(1.0, g.L_eta));
}

Eigen::MatrixXcd w_from_v(const BLState& s, const EtaOps& eta) {
    Eigen::MatrixXcd w(s.vx.rows(), s.vx.cols());
    for (int m = 0; m < s.box.n_modes(); ++m) {
        auto [kx, ky] = s.box.mode_of(m);
        Eigen::VectorXcd div =
            I * (double(kx) * s.vx.col(m) + double(ky) * s.vy.col(m));
        w.col(m) = -eta.integral_up(div);
    }
    return w;
}

SpectralField2D compatibility(const BLState& s, const EtaOps& eta) {
    SpectralField2D c(s.box.kx_max, s.box.ky_max);
    for (int m = 0; m < s.box.n_modes(); ++m) {
        auto [kx, ky] = s.box.mode_of(m);
        Eigen::VectorXcd div =
            I * (double(kx) * s.vx.col(m) + double(ky) * s.vy.col(m));
        c.at(kx, ky) = eta.integrate(div);
    }
    return c;
}

double compatibility_defect(const BLState& s, const EtaOps& eta) {
    return compatibility(s, eta).max_abs_coeff();
}

void project_compatibility(BLState& s, const EtaOps& eta) {
    SpectralField2D c = compatibility(s, eta);
    for (int m = 0; m < s.box.n_modes(); ++m) {
        auto [kx, ky] = s.box.mode_of(m);
        double k2 = double(kx) * kx + double(ky) * ky;
        if (k2 == 0.0) continue;
        cplx beta = c.at(kx, ky) / (I * k2 * eta.length());
        s.vx.col(m).array() -= double(kx) * beta;
        s.vy.col(m).array() -= double(ky) * beta;
    }
}

namespace detail {
void remove_compatibility_rate(const ModeBox& box, const EtaOps& eta,
                               Eigen::MatrixXcd& dvx, Eigen::MatrixXcd& dvy) {
    const Eigen::VectorXcd w = eta.weights().cast<cplx>();
    for (int m = 0; m < box.n_modes(); ++m) {
        auto [kx, ky] = box.mode_of(m);
        double k2 = double(kx) * kx + double(ky) * ky;
        if (k2 == 0.0) continue;
        cplx c_rate = I * (double(kx) * w.dot(dvx.col(m)) +
                           double(ky) * w.dot(dvy.col(m)));
        cplx beta = c_rate / (I * k2 * eta.length());
        dvx.col(m).array() -= double(kx) * beta;
        dvy.col(m).array() -= double(ky) * beta;
    }
}
}  // namespace detail

double bl_energy(const BLState& s, const EtaOps& eta) {
    const Eigen::VectorXd& w = eta.weights();
    double e = 0.0;
    for (int m = 0; m < s.box.n_modes(); ++m)
        e += w.dot((s.vx.col(m).cwiseAbs2() + s.vy.col(m).cwiseAbs2() +
                    s.theta.col(m).cwiseAbs2())
                       .eval());
    return 4.0 * M_PI * M_PI * e;
}

void step_linear_bl(BLState& s, double dt, const EtaOps& eta) {
    rk4_step(s, dt, LinearRhs{s.box, eta, /*lid=*/false});
}

SpectralField2D solve_iota_pressure(const BLState& s, const EtaOps& eta) {
    SpectralField2D pi(s.box.kx_max, s.box.ky_max);
    for (int m = 0; m < s.box.n_modes(); ++m) {
        auto [kx, ky] = s.box.mode_of(m);
        if (kx == 0 && ky == 0) continue;  // gauged to zero
        Eigen::VectorXcd up = eta.integral_up(Eigen::VectorXcd(s.theta.col(m)));
        pi.at(kx, ky) = -eta.integrate(up) / eta.length();
    }
    return pi;
}

void step_iota_linear(BLState& s, double dt, const EtaOps& eta,
                      double compat_tol) {
    double sup = sup_abs(s);
    if (sup > 0.0 && compatibility_defect(s, eta) > compat_tol * sup)
        throw ConfigError(
            "step_iota_linear: state violates the compatibility integral "
            "(int div_h v d eta != 0), which the lid system requires");
    rk4_step(s, dt, LinearRhs{s.box, eta, /*lid=*/true});
}

SpectralField2D compatibility_drift_rate(const BLState& s, const EtaOps& eta) {
    SpectralField2D rate(s.box.kx_max, s.box.ky_max);
    Eigen::VectorXd etaw = eta.weights();
    for (int j = 0; j < eta.n(); ++j) etaw(j) *= eta.node(j);
    for (int m = 0; m < s.box.n_modes(); ++m) {
        auto [kx, ky] = s.box.mode_of(m);
        double k2 = double(kx) * kx + double(ky) * ky;
        rate.at(kx, ky) = -k2 * etaw.cast<cplx>().dot(s.theta.col(m));
    }
    return rate;
}

double h1_cell_energy(const BLState& s, const EtaOps& eta) {
    const int n = eta.n();
    double e = 0.0;
    for (int m = 0; m < s.box.n_modes(); ++m)
        e += (s.vx.col(m).tail(n - 1) - s.vx.col(m).head(n - 1)).squaredNorm() +
             (s.vy.col(m).tail(n - 1) - s.vy.col(m).head(n - 1)).squaredNorm() +
             (s.theta.col(m).tail(n - 1) - s.theta.col(m).head(n - 1))
                 .squaredNorm();
    return 4.0 * M_PI * M_PI * e / eta.h();
}

double identity_rhs_k1(const BLState& s, const EtaOps& eta) {
    const int n = eta.n();
    double b = 0.0;
    for (int m = 0; m < s.box.n_modes(); ++m) {
        auto [kx, ky] = s.box.mode_of(m);
        Eigen::VectorXcd phi =
            I * (double(kx) * s.vx.col(m) + double(ky) * s.vy.col(m));
        cplx th0 = s.theta(0, m), thN = s.theta(n - 1, m);
        cplx dphi1 = phi(1) - phi(0), dphiN = phi(n - 1) - phi(n - 2);
        b += 2.0 * std::real(std::conj(thN) * phi(n - 1) -
                             std::conj(th0) * phi(0)) -
             std::real(th0 * std::conj(dphi1) + thN * std::conj(dphiN));
    }
    return 4.0 * M_PI * M_PI * b;
}

double hk_energy(const BLState& s, const EtaOps& eta, int k) {
    if (k < 0) throw ConfigError("hk_energy: derivative order must be >= 0");
    if (k == 0) return bl_energy(s, eta);
    const Eigen::VectorXd& w = eta.weights();
    double e = 0.0;
    for (int m = 0; m < s.box.n_modes(); ++m) {
        Eigen::VectorXcd dvx = eta.derivative(Eigen::VectorXcd(s.vx.col(m)), k);
        Eigen::VectorXcd dvy = eta.derivative(Eigen::VectorXcd(s.vy.col(m)), k);
        Eigen::VectorXcd dth =
            eta.derivative(Eigen::VectorXcd(s.theta.col(m)), k);
        e += w.dot((dvx.cwiseAbs2() + dvy.cwiseAbs2() + dth.cwiseAbs2()).eval());
    }
    return 4.0 * M_PI * M_PI * e;
}

namespace {

// Continuum boundary functional -2 int theta^(k-1) div_h v^(k-1) |_{eta=0}
// for k >= 2, with wall derivatives from the 4th-order eta stencils.
double identity_rhs_highk(const BLState& s, const EtaOps& eta, int k) {
    double b = 0.0;
    for (int m = 0; m < s.box.n_modes(); ++m) {
        auto [kx, ky] = s.box.mode_of(m);
        Eigen::VectorXcd phi =
            I * (double(kx) * s.vx.col(m) + double(ky) * s.vy.col(m));
        cplx thw =
            eta.derivative(Eigen::VectorXcd(s.theta.col(m)), k - 1)(0);
        cplx phiw = eta.derivative(phi, k - 1)(0);
        b += -2.0 * std::real(std::conj(thw) * phiw);
    }
    return 4.0 * M_PI * M_PI * b;
}

}  // namespace

EnergyIdentityReport energy_identity_report(const std::vector<BLState>& samples,
                                            const std::vector<double>& times,
                                            int k_order, const EtaOps& eta) {
    if (k_order < 1)
        throw ConfigError("energy_identity_report: k_order must be >= 1");
    const int n = static_cast<int>(samples.size());
    if (n != static_cast<int>(times.size()) || n < 5)
        throw ConfigError(
            "energy_identity_report: need >= 5 uniformly spaced samples");
    const double dt = times[1] - times[0];
    for (int i = 1; i + 1 < n; ++i)
        if (std::abs((times[i + 1] - times[i]) - dt) > 1e-12 * std::max(1.0, dt))
            throw ConfigError("energy_identity_report: nonuniform sample times");

    EnergyIdentityReport rep;
    rep.k_order = k_order;
    for (int i = 2; i + 2 < n; ++i) rep.times.push_back(times[i]);

    bool all_zero = true;
    for (const auto& s : samples) all_zero = all_zero && s.is_zero();
    rep.degenerate = all_zero;

    for (int k = 1; k <= k_order; ++k) {
        std::vector<double> E(n), B(n);
        for (int i = 0; i < n; ++i) {
            E[i] = (k == 1) ? h1_cell_energy(samples[i], eta)
                            : hk_energy(samples[i], eta, k);
            B[i] = (k == 1) ? identity_rhs_k1(samples[i], eta)
                            : identity_rhs_highk(samples[i], eta, k);
        }
        std::vector<double> res;
        double sup = 0.0;
        for (int i = 2; i + 2 < n; ++i) {
            double dE = (E[i - 2] - 8.0 * E[i - 1] + 8.0 * E[i + 1] - E[i + 2]) /
                        (12.0 * dt);
            double r = dE - B[i];
            res.push_back(r);
            sup = std::max(sup, std::abs(r));
        }
        rep.residual.push_back(std::move(res));
        rep.sup_residual.push_back(sup);

        // fitted growth constant: smallest C with E_k(t) <= e^{2 C t} E_k(0),
        // reported for the norm (not the squared energy).
        double C = 0.0;
        bool fit_ok = !all_zero && E[0] > 0.0;
        if (fit_ok) {
            for (int i = 1; i < n; ++i) {
                double t = times[i] - times[0];
                if (t <= 0.0 || E[i] <= 0.0) continue;
                C = std::max(C, 0.5 * std::log(E[i] / E[0]) / t);
            }
        }
        rep.growth_constant.push_back(fit_ok ? C : 0.0);
    }
    return rep;
}

}  // namespace iwbl
