/// @file nonlinear.hpp
/// @brief The nonlinear boundary layer solved by frozen-transport Picard
///        iteration: one linear "frozen" system per iterate, transported by
///        the previous iterate's velocity (plus an external trace-velocity
///        forcing), driven to its fixed point in the sup-plus-integral
///        contraction metric.
#pragma once

#include <utility>
#include <vector>

#include "iwbl/bl.hpp"
#include "iwbl/fourier.hpp"
#include "iwbl/norms.hpp"

namespace iwbl {

/// External forcing: a time-dependent horizontal velocity trace V(t, x, y)
/// (eta-independent), given as samples interpolated linearly in time.
/// An empty sample list means V = 0.
struct BLForcing {
    std::vector<double> times;
    std::vector<SpectralField2D> Vx, Vy;

    bool zero() const { return times.empty(); }
    void validate() const;
    /// Linear interpolation, clamped to the sample range.
    void eval(double t, SpectralField2D& vx_out, SpectralField2D& vy_out) const;
    static BLForcing none() { return {}; }
};

/// Physical-space samples of the frozen transport fields at one time:
/// a = V + v^o per eta node, w^o per eta node, and the (eta-independent)
/// horizontal gradients of V for the v . grad_h V term.
struct FrozenTransport {
    bool trivial = true;      ///< v^o = 0 and V = 0: transport terms vanish
    bool has_forcing = false;
    std::vector<PhysField> ax, ay, wo;  // size Neta when !trivial
    PhysField dxVx, dyVx, dxVy, dyVy;   // when has_forcing
};

/// Samples the transport fields of `vo` (with w^o = w_from_v) and the
/// forcing at time t.  Rejects `vo` violating the compatibility integral
/// beyond compat_tol relative to its sup (w^o would not vanish at the lid).
FrozenTransport build_transport(const BLState& vo, const BLForcing& forcing,
                                double t, FourierTransform2D& ft,
                                const EtaOps& eta, double compat_tol = 1e-8);

/// One RK4 step of the frozen system
///   v_t + (V+v^o).grad_h v + w^o v_eta + v.grad_h V = i k T*(theta),
///   theta_t + (V+v^o).grad_h theta + w^o theta_eta = U(i k . v),
/// with the transport sampled at the three RK4 stage times.  With trivial
/// transport at all stages this IS step_linear_bl (same code path).
void frozen_step(BLState& s, const FrozenTransport& begin,
                 const FrozenTransport& half, const FrozenTransport& end,
                 double dt, FourierTransform2D& ft, const EtaOps& eta);

/// Convenience form with the transport field frozen across the step (the
/// forcing is still sampled at the stage times).
void frozen_step(BLState& s, const BLState& vo, const BLForcing& forcing,
                 double dt, FourierTransform2D& ft, const EtaOps& eta);

struct Trajectory {
    std::vector<double> times;
    std::vector<BLState> states;

    double dt() const { return times.size() < 2 ? 0.0 : times[1] - times[0]; }
    bool empty() const { return states.empty(); }
};

struct PicardOptions {
    NormParams norms{0.5, 2.0, 1.6, 2};   ///< metric parameters (d, r, tau0, M)
    double C_d = 0.005;                   ///< tau-ODE proof-constant knob
    double dt = 0.0;                      ///< 0: auto_dt(grid)
    int max_iters = 25;
    double compat_tol = 1e-8;
};

/// Solves the frozen linear system on [0, T], transported by the previous
/// iterate `prev` (cubic interpolation at the half steps; empty `prev` means
/// v^o = 0).  Refuses horizons past the tau-schedule window (tau < tau0/2).
/// Each accepted step is re-projected onto the compatibility manifold.
Trajectory solve_frozen(const Trajectory& prev, const BLForcing& forcing,
                        const BLState& init, double T, FourierTransform2D& ft,
                        const EtaOps& eta, const PicardOptions& opt = {});

struct ContractionReport {
    int iterates = 0;
    std::vector<double> distances;     ///< metric distance between iterates
    std::vector<double> ratios;        ///< distances[n+1]/distances[n]
    std::vector<double> l2_distances;  ///< plain sup-L2 distances, for comparison
    double final_residual = 0.0;
    bool converged = false;
};

/// Metric distance between two trajectories on the schedule grid (states
/// are differenced sample-wise; avoids materializing a difference trajectory).
double trajectory_distance(const Trajectory& a, const Trajectory& b,
                           const TauSchedule& schedule, const EtaOps& eta,
                           const NormParams& p);

/// Picard iteration v^{(n+1)} = solve_frozen(v^{(n)}), seeded with the
/// v^o = 0 solution; stops when the metric distance between consecutive
/// iterates is <= tol.  Three consecutive non-decreasing distances raise
/// DivergedError (horizon too large or data too rough) with the distances
/// listed in the message.
std::pair<Trajectory, ContractionReport> picard_fixed_point(
    const BLState& init, const BLForcing& forcing, double T, double tol,
    FourierTransform2D& ft, const EtaOps& eta, const PicardOptions& opt = {});

struct ResidualSeries {
    std::vector<double> times;           ///< interior sample times
    std::vector<double> v_residual;      ///< discrete L2 of the velocity equation
    std::vector<double> theta_residual;  ///< discrete L2 of the buoyancy equation

    double sup() const;
};

/// Residual of the FULL nonlinear system (self-transport) along a uniformly
/// sampled trajectory: time derivatives by 4th-order centered differencing,
/// pressure gradient rendered with the stepper's quadrature-adjoint tail
/// integral, so the spatial operators match the solve exactly; independence
/// comes from the time differencing and the transport sampling.
ResidualSeries nonlinear_residual(const Trajectory& traj,
                                  const BLForcing& forcing,
                                  FourierTransform2D& ft, const EtaOps& eta);

}  // namespace iwbl
