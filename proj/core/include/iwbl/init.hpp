/// @file init.hpp
/// @brief Named analytic initial-data recipes for the bulk and
///        boundary-layer solvers.
///
/// Bulk recipes (single horizontal mode k, physical amplitude a):
///   "zero"
///   "bulk-single-mode"  theta = a cos(pi z) cos(k.x), w = a z^2(1-z)^2
///                       cos(k.x), v parallel to k from the discrete
///                       divergence constraint.  Generic wall data:
///                       lap_h theta does not vanish at the walls.
///   "bulk-invariant"    theta = a sin(pi z) cos(k.x), w = a sin(pi z)
///                       cos(k.x): all even z-derivatives of theta and w and
///                       odd z-derivatives of v vanish at the walls (the
///                       trace-invariant family).
///   "bulk-scaling"      theta = a cos(k.x) (constant in z), w = a z^3(1-z)^3
///                       cos(k.x).  Generic (lap_h theta nonzero at the
///                       walls) but with vanishing *initial* wall traces
///                       dzz w, dzz theta, dz v, so the closed-form traces
///                       are pure powers of t/eps and the fitted scaling
///                       exponents are clean even over a short epsilon range.
/// Boundary-layer recipes (decay rate c):
///   "zero"
///   "bl-exp"            theta = a e^{-c eta} cos(k.x), v = 0.
///   "bl-poly-exp"       vx component a (1 - c eta) e^{-c eta} cos(k.x)
///                       (zero eta-integral, hence compatible) plus
///                       theta = a e^{-c eta} cos(k.x).
#pragma once

#include <string>

#include "iwbl/bl.hpp"
#include "iwbl/bulk.hpp"

namespace iwbl {

struct InitParams {
    std::string recipe = "zero";
    double amplitude = 1e-2;
    int kx = 1, ky = 0;
    double decay = 1.0;  ///< eta decay rate c of the bl recipes

    void validate(const GridSpec& g) const;
};

BulkState make_bulk_init(const InitParams& p, const GridSpec& g);
BLState make_bl_init(const InitParams& p, const GridSpec& g);

}  // namespace iwbl
