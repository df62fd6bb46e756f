/// @file bulk.hpp
/// @brief Linear bulk dynamics between the two walls: fast-wave pressure
///        solve, exact per-mode propagator, wall-trace diagnostics, their
///        closed-form predictions, and the epsilon-scaling study.
///
/// Per horizontal mode k the continuum system
///   eps v_t = -i k p,   eps w_t = theta - p',   eps theta_t = -w,
/// with impermeable walls and the divergence constraint i k . v + w' = 0,
/// closes in (w, theta) alone: eliminating the pressure gives
///   eps w_t = K theta,   K = |k|^2 (|k|^2 - dzz)^{-1}  (Dirichlet walls),
/// a self-adjoint positive operator.  Discretely K is built from the interior
/// block of D^T H D (the SBP quadratic form of |w'|^2), which makes the
/// per-mode generator exactly skew-adjoint in the energy
///   w^T (W + A/|k|^2) w + theta^T H theta
/// -- the discrete |w|^2 + |v_par|^2 + |theta|^2 under the constraint.  The
/// matrix-exponential stepper therefore conserves energy, pins w at the walls,
/// and (recovering v from the constraint) keeps the divergence defect at
/// round-off, while the 4th-order boundary closure of D keeps the one-sided
/// wall traces accurate.
#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "iwbl/fourier.hpp"
#include "iwbl/grid.hpp"
#include "iwbl/modes.hpp"
#include "iwbl/spectral_field.hpp"
#include "iwbl/z_ops.hpp"

namespace iwbl {

/// Bulk state: per-mode vertical profiles, one column per retained mode.
struct BulkState {
    GridSpec grid;
    ModeBox box;
    double time = 0.0;
    Eigen::MatrixXcd vx, vy, w, theta;  // Nz x n_modes

    explicit BulkState(const GridSpec& g)
        : grid(g), box{g.Kx(), g.Ky()} {
        vx.setZero(g.Nz, box.n_modes());
        vy = vx; w = vx; theta = vx;
    }

    void enforce_hermitian();
    /// max over modes of ||i k . v + D w||_inf (discrete divergence defect)
    double divergence_defect(const ZOps& z) const;
    /// max |w| at the two walls over all modes
    double impermeability_defect() const;
};

/// Discrete L2 energy (SBP norm in z, Parseval in the horizontal).
double bulk_energy(const BulkState& s, const ZOps& z);

/// Strong-form Neumann pressure solve for one mode:
///   p'' - k2 p = theta'  on (0,1),  p'(0) = theta(0),  p'(1) = theta(1),
/// 4th-order interior stencils; for k2 = 0 the solution is gauged to zero
/// SBP-weighted vertical mean.
Eigen::VectorXcd solve_pressure_mode(const Eigen::VectorXcd& theta, double k2, const ZOps& z);

/// Field-level pressure solve (applies solve_pressure_mode to every mode).
Eigen::MatrixXcd solve_pressure(const BulkState& s, const ZOps& z);

/// Exact per-mode propagator: caches exp((dt/eps) M_k) per canonical mode and
/// advances the state by dt each step().  Modes that are identically zero are
/// skipped (they stay zero).
class BulkPropagator {
  public:
    BulkPropagator(const GridSpec& grid, double eps, double dt);

    void step(BulkState& s);
    double eps() const { return eps_; }
    double dt() const { return dt_; }
    const ZOps& zops() const { return z_; }

    /// Implicit pressure of the propagator for a nonzero mode (p = P theta),
    /// p = -(1/|k|^2) D K theta with zero extension at the walls; exposed for
    /// tests.  Throws ConfigError for kx = ky = 0.
    Eigen::MatrixXd projection_pressure_matrix(int kx, int ky) const;

    /// Discrete K = (A + k2 W)^{-1} k2 W on interior nodes; exposed for tests.
    Eigen::MatrixXd wall_operator(double k2) const;

  private:
    struct ModeOp {
        Eigen::MatrixXd E;  // exp((dt/eps) M), acting on [w_interior; theta]
    };
    const ModeOp& op(int k2);

    GridSpec grid_;
    ZOps z_;
    double eps_, dt_;
    std::map<int, ModeOp> cache_;
};

/// Wall-trace data at one wall: retained-mode coefficients and the physical
/// sup-magnitude of each diagnostic trace.
struct WallTraces {
    SpectralField2D dzz_w, dzz_theta, dz_vx, dz_vy, lap_theta;
    double sup_dzz_w = 0, sup_dzz_theta = 0, sup_dz_v = 0, sup_lap_theta = 0;
};

struct TraceReport {
    WallTraces wall[2];  // [0]: z = 0, [1]: z = 1
};

/// One-sided 4th-order wall traces of the current state.
TraceReport boundary_trace_diagnostics(const BulkState& s, const ZOps& z, FourierTransform2D& ft);

/// Closed-form trace predictions at time t from the initial traces:
///   dzz_w(t)  = dzz_w(0) + (t/eps) lap_theta(0)
///   dzz_th(t) = dzz_th(0) - (t/eps) dzz_w(0) - (t^2/(2 eps^2)) lap_theta(0)
///   dz_v(t)   = dz_v(0) - (t/eps) i k theta(0)|_wall,
/// with lap_theta|_wall constant in time.
TraceReport predicted_traces(const BulkState& init, double eps, double t, const ZOps& z,
                             FourierTransform2D& ft);

struct ScalingReport {
    std::vector<double> eps;
    std::vector<double> sup_dzz_w, sup_dzz_theta, sup_dz_v;  // sup over walls & samples
    double slope_dzz_w = 0, slope_dzz_theta = 0, slope_dz_v = 0;
};

/// Runs the initial state for each epsilon over [0, T], sampling traces
/// n_samples times, and fits log-log slopes of the sup-magnitudes vs epsilon.
ScalingReport scaling_study(const BulkState& init, const std::vector<double>& eps_list, double T,
                            int n_samples, FourierTransform2D& ft);

}  // namespace iwbl
