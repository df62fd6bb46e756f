/// @file z_ops.hpp
/// @brief Vertical (wall-normal) discrete calculus on the uniform z-grid of
///        [0,1]: a diagonal-norm summation-by-parts first-derivative pair
///        (D, H) with 4th-order boundary closure (8th-order interior), used
///        by the bulk propagator, and 4th-order one-sided wall stencils used
///        by the boundary-trace diagnostics.  The boundary closure order
///        matters: wall second derivatives of the evolved fields amplify
///        near-wall truncation error by 1/h^2, and a 2nd-order closure
///        leaves an O(h) secular trace error.
#pragma once

#include <Eigen/Dense>

namespace iwbl {

class ZOps {
  public:
    explicit ZOps(int nz);

    int n() const { return n_; }
    double h() const { return h_; }
    double node(int j) const { return j * h_; }

    /// Summation-by-parts first derivative: 8th-order interior, 4th-order
    /// boundary closure, satisfying H D + D^T H = diag(-1, 0, ..., 0, 1).
    /// The boundary block is constructed at startup from the defining linear
    /// relations (in Q = H D they are all linear) and verified.
    const Eigen::MatrixXd& D() const { return d_; }
    /// Diagonal SBP norm (quadrature) matrix.
    const Eigen::VectorXd& Hdiag() const { return hdiag_; }

    /// 4th-order first/second derivative of a profile at a wall
    /// (wall = 0 for z=0, 1 for z=1), one-sided stencils.
    double wall_d1(const Eigen::VectorXd& f, int wall) const;
    double wall_d2(const Eigen::VectorXd& f, int wall) const;
    std::complex<double> wall_d1(const Eigen::VectorXcd& f, int wall) const;
    std::complex<double> wall_d2(const Eigen::VectorXcd& f, int wall) const;

  private:
    int n_;
    double h_;
    Eigen::MatrixXd d_;
    Eigen::VectorXd hdiag_;
    Eigen::VectorXd d1w_, d2w_;  // one-sided wall stencil weights (z = 0 side)
};

}  // namespace iwbl
