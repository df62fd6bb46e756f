/// @file eta_ops.hpp
/// @brief Discrete calculus on the uniform boundary-layer grid [0, L_eta]:
///        composite trapezoid quadrature, cumulative (up) and tail integrals,
///        the quadrature-adjoint tail used by the energy-conserving steppers,
///        and finite-difference eta-derivatives of arbitrary order.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "iwbl/grid.hpp"

namespace iwbl {

/// Fornberg finite-difference weights: weights w_i such that
/// f^(m)(z) ~ sum_i w_i f(x_i), exact for polynomials of degree <= len(x)-1.
Eigen::VectorXd fd_weights(double z, const Eigen::VectorXd& x, int m);

class EtaOps {
  public:
    EtaOps(int n, double length);
    explicit EtaOps(const GridSpec& g) : EtaOps(g.Neta, g.L_eta) {}

    int n() const { return n_; }
    double length() const { return length_; }
    double h() const { return h_; }
    double node(int j) const { return j * h_; }
    const Eigen::VectorXd& weights() const { return w_; }  ///< trapezoid weights

    /// Composite trapezoid integral over [0, L_eta].
    template <typename Derived>
    typename Derived::Scalar integrate(const Eigen::MatrixBase<Derived>& f) const {
        return (w_.cast<typename Derived::Scalar>().cwiseProduct(f.derived())).sum();
    }

    /// Cumulative integral U(f)(eta_j) = int_0^{eta_j} f, composite trapezoid.
    Eigen::VectorXcd integral_up(const Eigen::VectorXcd& f) const;
    Eigen::VectorXd integral_up(const Eigen::VectorXd& f) const;

    /// Tail integral T(f)(eta_j) = int_{eta_j}^{L_eta} f.  Computed as
    /// total - up with identical summation order, so
    /// up(eta) + tail(eta) = total holds exactly in floating point and
    /// tail(L_eta) = 0 exactly.
    Eigen::VectorXcd integral_tail(const Eigen::VectorXcd& f) const;
    Eigen::VectorXd integral_tail(const Eigen::VectorXd& f) const;

    /// Adjoint tail: the unique operator with <U f, g>_W = <f, T* g>_W for the
    /// trapezoid inner product.  Equals integral_tail except for O(h) tweaks at
    /// the two boundary nodes; steppers use it so the semi-discrete system is
    /// exactly skew-adjoint (discrete L2 energy conserved to round-off).
    Eigen::VectorXcd integral_tail_adjoint(const Eigen::VectorXcd& f) const;

    /// m-th eta-derivative, 4th-order stencils (centered in the interior,
    /// one-sided near the ends).
    Eigen::VectorXcd derivative(const Eigen::VectorXcd& f, int m = 1) const;
    Eigen::VectorXd derivative(const Eigen::VectorXd& f, int m = 1) const;

    /// True if |f| at the last node exceeds threshold * max|f| (data not
    /// decayed by eta = L_eta).
    bool decay_violated(const Eigen::VectorXcd& f, double threshold) const;

  private:
    const std::vector<std::pair<int, Eigen::VectorXd>>& stencils(int m) const;

    int n_;
    double length_, h_;
    Eigen::VectorXd w_;
    // cached stencils per derivative order: (first node of window, weights)
    mutable std::vector<std::vector<std::pair<int, Eigen::VectorXd>>> stencil_cache_;
};

}  // namespace iwbl
