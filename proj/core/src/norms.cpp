#include "iwbl/norms.hpp"

#include <algorithm>
#include <cmath>

namespace iwbl {

namespace {

double semi_norm_impl(const std::vector<const Eigen::MatrixXcd*>& comps,
                      const ModeBox& box, const EtaOps& eta,
                      const NormParams& p, int m) {
    if (m > p.M)
        throw ConfigError("semi_norm: order m exceeds truncation order M");
    const int n = eta.n(), nm = box.n_modes();
    Eigen::VectorXd expw(n);
    for (int j = 0; j < n; ++j) expw(j) = std::exp(p.d * eta.node(j));

    double s = 0.0;
    for (int ae = 0; ae <= m; ++ae) {
        // eta-derivatives of every column, computed once per eta-order
        std::vector<Eigen::MatrixXcd> dcomp;
        dcomp.reserve(comps.size());
        for (const auto* f : comps) {
            Eigen::MatrixXcd dfm(n, nm);
            for (int c = 0; c < nm; ++c)
                dfm.col(c) =
                    (ae == 0)
                        ? Eigen::VectorXcd(f->col(c))
                        : eta.derivative(Eigen::VectorXcd(f->col(c)), ae);
            dcomp.push_back(std::move(dfm));
        }
        for (int ax = 0; ax + ae <= m; ++ax) {
            const int ay = m - ae - ax;
            Eigen::VectorXd sq = Eigen::VectorXd::Zero(n);
            for (const auto& dfm : dcomp)
                for (int c = 0; c < nm; ++c) {
                    auto [kx, ky] = box.mode_of(c);
                    if ((ax > 0 && kx == 0) || (ay > 0 && ky == 0)) continue;
                    double scale = std::pow(std::abs(double(kx)), ax) *
                                   std::pow(std::abs(double(ky)), ay);
                    sq += (scale * scale) * dfm.col(c).cwiseAbs2();
                }
            s += 2.0 * M_PI * (expw.array() * sq.array().sqrt()).maxCoeff();
        }
    }
    return s;
}

template <typename SemiFn>
NormValue weighted_sum(const NormParams& p, bool y_variant, SemiFn&& sm) {
    NormValue out;
    double term_w = y_variant ? 1.0 : 1.0;  // tau^m/m! resp. tau^{m-1}/(m-1)!
    for (int m = y_variant ? 1 : 0; m <= p.M; ++m) {
        if (m > (y_variant ? 1 : 0))
            term_w *= p.tau / (y_variant ? double(m - 1) : double(m));
        double t = sm(m) * std::pow(double(m + 1), p.r) * term_w;
        out.value += t;
        if (m == p.M) out.last_term = t;
    }
    out.truncation_warning = out.last_term > 0.01 * out.value && out.value > 0.0;
    return out;
}

}  // namespace

double semi_norm(const Eigen::MatrixXcd& f, const ModeBox& box,
                 const EtaOps& eta, const NormParams& p, int m) {
    return semi_norm_impl({&f}, box, eta, p, m);
}

double semi_norm(const std::vector<const Eigen::MatrixXcd*>& comps,
                 const ModeBox& box, const EtaOps& eta, const NormParams& p,
                 int m) {
    return semi_norm_impl(comps, box, eta, p, m);
}

double semi_norm(const BLState& s, const EtaOps& eta, const NormParams& p,
                 int m) {
    return semi_norm_impl({&s.vx, &s.vy}, s.box, eta, p, m) +
           semi_norm_impl({&s.theta}, s.box, eta, p, m);
}

NormValue x_norm(const BLState& s, const EtaOps& eta, const NormParams& p) {
    return weighted_sum(p, false,
                        [&](int m) { return semi_norm(s, eta, p, m); });
}

NormValue x_norm(const Eigen::MatrixXcd& f, const ModeBox& box,
                 const EtaOps& eta, const NormParams& p) {
    return weighted_sum(p, false,
                        [&](int m) { return semi_norm(f, box, eta, p, m); });
}

NormValue y_norm(const BLState& s, const EtaOps& eta, const NormParams& p) {
    return weighted_sum(p, true,
                        [&](int m) { return semi_norm(s, eta, p, m); });
}

NormValue y_norm(const Eigen::MatrixXcd& f, const ModeBox& box,
                 const EtaOps& eta, const NormParams& p) {
    return weighted_sum(p, true,
                        [&](int m) { return semi_norm(f, box, eta, p, m); });
}

double tau_rate(double tau, double tau0, double C_d, double M_data, double d) {
    return -(2.0 * C_d * (1.0 + 1.0 / tau) * M_data + 1.0 / d +
             4.0 * C_d * (2.0 / tau0 + 4.0 / (tau0 * tau0)) * M_data +
             4.0 * C_d * (1.0 + 2.0 / tau0) * M_data);
}

namespace {

double rk4_tau(double tau, double h, double tau0, double C_d, double M_data,
               double d) {
    auto f = [&](double t) { return tau_rate(t, tau0, C_d, M_data, d); };
    double k1 = f(tau);
    double k2 = f(tau + 0.5 * h * k1);
    double k3 = f(tau + 0.5 * h * k2);
    double k4 = f(tau + h * k3);
    return tau + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

TauSchedule tau_schedule(double tau0, double C_d, double M_data, double d,
                         double T, int n_steps) {
    if (!(tau0 > 0.0) || !(d > 0.0) || !(C_d > 0.0) || M_data < 0.0 ||
        !(T > 0.0) || n_steps < 1)
        throw ConfigError(
            "tau_schedule: require tau0, d, C_d, T > 0, M_data >= 0");

    TauSchedule sch;
    sch.tau0 = tau0;
    sch.C_d = C_d;
    sch.M_data = M_data;
    sch.d = d;

    const double half = 0.5 * tau0;
    const double h = T / n_steps;
    double t = 0.0, tau = tau0;
    sch.times.push_back(t);
    sch.samples.push_back(tau);

    auto locate_crossing = [&](double t_lo, double tau_lo, double h_max) {
        // bisection on the sub-step size from (t_lo, tau_lo)
        double lo = 0.0, hi = h_max;
        for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, t_lo + h_max);
             ++it) {
            double mid = 0.5 * (lo + hi);
            (rk4_tau(tau_lo, mid, tau0, C_d, M_data, d) > half ? lo : hi) = mid;
        }
        return t_lo + 0.5 * (lo + hi);
    };

    bool crossed = false;
    for (int i = 0; i < n_steps; ++i) {
        double tau_next = rk4_tau(tau, h, tau0, C_d, M_data, d);
        if (tau_next <= half) {
            sch.T_max = locate_crossing(t, tau, h);
            sch.times.push_back(sch.T_max);
            sch.samples.push_back(half);
            sch.truncated = true;
            crossed = true;
            break;
        }
        t += h;
        tau = tau_next;
        sch.times.push_back(t);
        sch.samples.push_back(tau);
    }

    if (!crossed) {
        // keep integrating past T (samples not recorded) to report T_max;
        // tau' <= -1/d bounds the remaining time by d * (tau - tau0/2)
        double tt = t, ta = tau;
        while (true) {
            double next = rk4_tau(ta, h, tau0, C_d, M_data, d);
            if (next <= half) {
                sch.T_max = locate_crossing(tt, ta, h);
                break;
            }
            tt += h;
            ta = next;
        }
    }
    return sch;
}

double contraction_metric(const std::vector<BLState>& traj,
                          const TauSchedule& schedule, const EtaOps& eta,
                          NormParams p) {
    const size_t n = schedule.times.size();
    if (traj.size() != n)
        throw ConfigError(
            "contraction_metric: trajectory not sampled on the schedule grid");
    for (size_t i = 0; i < n; ++i)
        if (std::abs(traj[i].time - schedule.times[i]) >
            1e-9 * std::max(1.0, schedule.times[i]))
            throw ConfigError(
                "contraction_metric: trajectory times differ from the "
                "schedule grid");

    double sup_x = 0.0;
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) {
        p.tau = schedule.samples[i];
        sup_x = std::max(sup_x, x_norm(traj[i], eta, p).value);
        y[i] = y_norm(traj[i], eta, p).value;
    }
    double integral = 0.0;
    for (size_t i = 1; i < n; ++i)
        integral += 0.5 * (schedule.times[i] - schedule.times[i - 1]) *
                    (y[i] + y[i - 1]);
    return 0.5 * sup_x + schedule.metric_coefficient() * integral;
}

double inequality_term(int index, double r, int m, int j) {
    const double mp = m, jp = j;
    switch (index) {
        case 1:
            return std::pow(mp + 1.0, r) / std::pow(mp - jp + 2.0, r) *
                   std::sqrt((jp + 1.0) * (jp + 2.0)) /
                   std::pow((jp + 1.0) * (jp + 3.0), 0.5 * r);
        case 2:
            return std::pow(mp + 1.0, r) / std::pow(jp + 1.0, r) *
                   std::sqrt((mp - jp + 1.0) * (mp - jp + 2.0)) /
                   std::pow((mp - jp + 2.0) * (mp - jp + 4.0), 0.5 * r);
        case 3:
            return std::pow(mp + 1.0, r) / std::pow(mp - jp + 2.0, r) *
                   (jp + 1.0) * std::sqrt((jp + 2.0) * (jp + 3.0)) /
                   std::pow((jp + 2.0) * (jp + 4.0), 0.5 * r);
        case 4:
            return std::pow(mp + 1.0, r) / std::pow(jp + 2.0, r) *
                   (mp - jp + 1.0) * std::sqrt((mp - jp + 2.0) * (mp - jp + 3.0)) /
                   std::pow((mp - jp + 2.0) * (mp - jp + 4.0), 0.5 * r);
        default:
            throw ConfigError("inequality_term: index must be 1..4");
    }
}

InequalityScan scan_inequality(int index, int m_max, double r) {
    if (index < 1 || index > 4)
        throw ConfigError("scan_inequality: index must be 1..4");
    if (m_max < 1) throw ConfigError("scan_inequality: m_max must be >= 1");
    const double threshold = (index <= 2) ? 1.0 : 2.0;
    if (r < threshold)
        throw ConfigError("scan_inequality: inequality " + std::to_string(index) +
                          " requires r >= " + std::to_string(int(threshold)) +
                          " (got r = " + std::to_string(r) + ")");

    InequalityScan scan;
    scan.index = index;
    scan.r = r;
    scan.m_max = m_max;
    const bool low_half = (index == 1 || index == 3);
    double sup_half = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        int j_lo = low_half ? 0 : m / 2 + 1;
        int j_hi = low_half ? m / 2 : m;
        for (int j = j_lo; j <= j_hi; ++j) {
            double v = inequality_term(index, r, m, j);
            if (v > scan.sup) {
                scan.sup = v;
                scan.arg_m = m;
                scan.arg_j = j;
            }
            if (m <= m_max / 2) sup_half = std::max(sup_half, v);
        }
    }
    // The valid expressions approach their suprema monotonically from below,
    // so doubling the m-range still raises the scan max by a few percent;
    // genuinely unbounded variants (r below threshold) at least double.  A
    // 10% allowance separates "bounded, plateauing" from "growing".
    scan.plateau = scan.sup <= sup_half * 1.10;
    return scan;
}

std::vector<InequalityScan> verify_inequalities(int m_max, double r) {
    std::vector<InequalityScan> scans;
    for (int i = 1; i <= 4; ++i) scans.push_back(scan_inequality(i, m_max, r));
    return scans;
}

}  // namespace iwbl
