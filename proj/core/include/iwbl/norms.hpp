/// @file norms.hpp
/// @brief Analytic-norm bookkeeping for the boundary layer: exponentially
///        weighted derivative semi-norms, the X/Y norms with factorial
///        weights encoding an analyticity radius tau, the tau-decay ODE and
///        its schedule, the sup-plus-integral contraction metric, and
///        brute-force scans of the four combinatorial weight inequalities.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "iwbl/bl.hpp"
#include "iwbl/errors.hpp"
#include "iwbl/eta_ops.hpp"
#include "iwbl/modes.hpp"

namespace iwbl {

struct NormParams {
    double d = 1.0;    ///< exponential eta-weight rate (> 0)
    double r = 2.0;    ///< polynomial weight exponent (>= 2)
    double tau = 0.5;  ///< analyticity radius (> 0)
    int M = 8;         ///< derivative truncation order (>= 2)

    void validate() const {
        if (!(d > 0.0) || !(tau > 0.0) || r < 2.0 || M < 2)
            throw ConfigError(
                "NormParams: require d > 0, tau > 0, r >= 2, M >= 2");
    }
};

/// Weighted semi-norm of order m of a scalar field given as per-mode
/// eta-profiles (one column per retained mode):
///   |f|_{d,m} = sum_{|alpha| = m} sup_eta e^{d eta} ||d^alpha f||_{L2(T^2)}.
/// Horizontal derivatives act by mode multiplication, eta-derivatives by the
/// 4th-order stencils; the sup is the grid max.
double semi_norm(const Eigen::MatrixXcd& f, const ModeBox& box,
                 const EtaOps& eta, const NormParams& p, int m);

/// Same for a multi-component field (L2 across components under the norm).
double semi_norm(const std::vector<const Eigen::MatrixXcd*>& comps,
                 const ModeBox& box, const EtaOps& eta, const NormParams& p,
                 int m);

/// Pair semi-norm of a boundary-layer state: |(v, theta)| = |v| + |theta|.
double semi_norm(const BLState& s, const EtaOps& eta, const NormParams& p,
                 int m);

struct NormValue {
    double value = 0.0;
    double last_term = 0.0;       ///< magnitude of the order-M term
    bool truncation_warning = false;  ///< last term exceeds 1% of the sum

    operator double() const { return value; }
};

/// X norm: sum_{m=0}^{M} |f|_{d,m} (m+1)^r tau^m / m!.
NormValue x_norm(const BLState& s, const EtaOps& eta, const NormParams& p);
NormValue x_norm(const Eigen::MatrixXcd& f, const ModeBox& box,
                 const EtaOps& eta, const NormParams& p);

/// Y norm (one derivative heavier): sum_{m=1}^{M} |f|_{d,m} (m+1)^r
/// tau^{m-1} / (m-1)!.
NormValue y_norm(const BLState& s, const EtaOps& eta, const NormParams& p);
NormValue y_norm(const Eigen::MatrixXcd& f, const ModeBox& box,
                 const EtaOps& eta, const NormParams& p);

struct TauSchedule {
    double tau0 = 1.0;
    double C_d = 1.0;
    double M_data = 0.0;
    double d = 1.0;
    std::vector<double> times;    ///< uniform solver time grid
    std::vector<double> samples;  ///< tau(t) on that grid
    double T_max = 0.0;           ///< first time tau(t) = tau0 / 2
    bool truncated = false;       ///< requested horizon exceeded T_max

    double horizon() const { return times.empty() ? 0.0 : times.back(); }
    /// Coefficient of the integral term of the contraction metric.
    double metric_coefficient() const {
        return 4.0 * C_d * (2.0 / tau0 + 4.0 / (tau0 * tau0)) * M_data;
    }
};

/// Right-hand side of the radius-decay ODE (strictly negative):
///   tau' = -[ 2 C_d (1 + 1/tau) M + 1/d
///             + 4 C_d (2/tau0 + 4/tau0^2) M + 4 C_d (1 + 2/tau0) M ].
double tau_rate(double tau, double tau0, double C_d, double M_data, double d);

/// RK4 integration of the radius ODE on [0, T] with n_steps uniform steps.
/// T_max (the tau0/2 crossing) is located by bisection inside the crossing
/// step; if T > T_max the schedule is truncated there and flagged.
TauSchedule tau_schedule(double tau0, double C_d, double M_data, double d,
                         double T, int n_steps = 2048);

/// Contraction metric of a (difference) trajectory sampled exactly on the
/// schedule's grid:
///   E = (1/2) sup_t ||.||_{X_tau(t)}
///       + 4 C_d (2/tau0 + 4/tau0^2) M_data * int_0^T ||.||_{Y_tau(t)} dt.
/// The tau field of `p` is overridden by the schedule sample at each time.
double contraction_metric(const std::vector<BLState>& traj,
                          const TauSchedule& schedule, const EtaOps& eta,
                          NormParams p);

struct InequalityScan {
    int index = 0;  ///< 1..4
    double r = 0.0;
    int m_max = 0;
    double sup = 0.0;
    int arg_m = 0, arg_j = 0;
    bool plateau = false;  ///< sup over m <= m_max within 10% of m <= m_max/2
};

/// Value of displayed inequality expression `index` (1..4) at (m, j).
/// Inequalities 1 and 3 range over 0 <= j <= floor(m/2); 2 and 4 over
/// floor(m/2)+1 <= j <= m.  Valid for r >= 1 (1, 2) or r >= 2 (3, 4).
double inequality_term(int index, double r, int m, int j);

/// Exhaustive scan of one inequality over 0 <= m <= m_max and its j-range.
/// Refuses r below the inequality's validity threshold, naming it.
InequalityScan scan_inequality(int index, int m_max, double r);

/// All four scans (at the given r where valid; refusals propagate).
std::vector<InequalityScan> verify_inequalities(int m_max, double r);

}  // namespace iwbl
