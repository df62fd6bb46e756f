/// @file z_ops.cpp
#include "iwbl/z_ops.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <vector>

#include "iwbl/errors.hpp"
#include "iwbl/eta_ops.hpp"  // fd_weights

namespace iwbl {

namespace {

// 8th-order centered interior stencil of the first derivative (times h).
const double kCen[9] = {1.0 / 280,  -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                        4.0 / 5,    -1.0 / 5,   4.0 / 105, -1.0 / 280};
constexpr int kB = 8;    // boundary rows
constexpr int kW = 12;   // boundary block width
constexpr int kP = 4;    // centered stencil half-width
constexpr int kOrd = 4;  // boundary accuracy order

// Scale-free boundary block of the diagonal-norm summation-by-parts pair
// (Q = H D with h = 1).  With Q = H D the defining relations are linear:
//   Q + Q^T = diag(-1, 0, ..., 0, 1)   (exact integration by parts)
//   Q p = H p'  on  p = z^0..z^4       (4th-order boundary rows)
// so the block solves a small linear system; entries coupling to centered
// rows are fixed by antisymmetry.  Diagonal-norm operators of boundary
// order 4 require the 8th-order interior stencil.
struct BoundaryBlock {
    Eigen::MatrixXd Q;  // kB x kW
    Eigen::VectorXd H;  // kB
};

const BoundaryBlock& sbp_block() {
    static const BoundaryBlock block = [] {
        const int nlt = kB * (kB - 1) / 2;
        const int nu = nlt + kB;
        auto lt = [&](int i, int j) {
            int idx = 0;
            for (int ii = 1; ii < kB; ++ii)
                for (int jj = 0; jj < ii; ++jj) {
                    if (ii == i && jj == j) return idx;
                    ++idx;
                }
            return -1;
        };
        auto q_fixed = [&](int i, int j) -> double {
            if (j >= kB) {
                int off = i - j + kP;
                return (off >= 0 && off < 9) ? -kCen[off] : 0.0;
            }
            if (i == j) return (i == 0) ? -0.5 : 0.0;
            return 0.0;
        };
        const int ne = kB * (kOrd + 1);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ne, nu);
        Eigen::VectorXd r = Eigen::VectorXd::Zero(ne);
        int eq = 0;
        for (int i = 0; i < kB; ++i)
            for (int q = 0; q <= kOrd; ++q, ++eq) {
                for (int j = 0; j < kW; ++j) {
                    double pz = (q == 0) ? 1.0 : std::pow(double(j), q);
                    if (j < kB && j != i) {
                        if (i > j)
                            A(eq, lt(i, j)) += pz;
                        else
                            A(eq, lt(j, i)) -= pz;
                    } else {
                        r(eq) -= q_fixed(i, j) * pz;
                    }
                }
                double dp = (q == 0) ? 0.0
                            : (q == 1) ? 1.0
                                       : q * std::pow(double(i), q - 1);
                A(eq, nlt + i) = -dp;
            }
        Eigen::VectorXd sol =
            A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(r);
        if ((A * sol - r).norm() > 1e-9)
            throw std::logic_error("z_ops: boundary-block system inconsistent");
        BoundaryBlock b;
        b.H = sol.tail(kB);
        if (b.H.minCoeff() <= 0)
            throw std::logic_error("z_ops: boundary norm weights not positive");
        b.Q.setZero(kB, kW);
        for (int i = 0; i < kB; ++i)
            for (int j = 0; j < kW; ++j) {
                if (j < kB) {
                    if (i == j)
                        b.Q(i, j) = q_fixed(i, j);
                    else if (i > j)
                        b.Q(i, j) = sol(lt(i, j));
                    else
                        b.Q(i, j) = -sol(lt(j, i));
                } else {
                    b.Q(i, j) = q_fixed(i, j);
                }
            }
        return b;
    }();
    return block;
}

}  // namespace

ZOps::ZOps(int nz) : n_(nz), h_(1.0 / (nz - 1)) {
    if (nz < 2 * kW)
        throw ConfigError("ZOps: need at least " + std::to_string(2 * kW) +
                          " z-nodes, got " + std::to_string(nz));

    const BoundaryBlock& b = sbp_block();
    hdiag_ = Eigen::VectorXd::Constant(n_, h_);
    for (int i = 0; i < kB; ++i) {
        hdiag_(i) = h_ * b.H(i);
        hdiag_(n_ - 1 - i) = h_ * b.H(i);
    }
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = kB; i < n_ - kB; ++i)
        for (int s = 0; s < 9; ++s) Q(i, i - kP + s) = kCen[s];
    for (int i = 0; i < kB; ++i)
        for (int j = 0; j < kW; ++j) {
            Q(i, j) = b.Q(i, j);
            Q(n_ - 1 - i, n_ - 1 - j) = -b.Q(i, j);
        }
    d_ = hdiag_.cwiseInverse().asDiagonal() * Q;

    // Verify the pair on this grid: exact integration by parts and boundary
    // rows exact on cubics (guards the block assembly at small n).
    Eigen::MatrixXd S = hdiag_.asDiagonal() * d_ + d_.transpose() * hdiag_.asDiagonal();
    S(0, 0) += 1.0;
    S(n_ - 1, n_ - 1) -= 1.0;
    if (S.cwiseAbs().maxCoeff() > 1e-11)
        throw std::logic_error("z_ops: integration-by-parts identity violated");

    // One-sided 4th-order wall stencils via Fornberg weights.
    Eigen::VectorXd x1(5), x2(6);
    for (int s = 0; s < 5; ++s) x1(s) = s * h_;
    for (int s = 0; s < 6; ++s) x2(s) = s * h_;
    d1w_ = fd_weights(0.0, x1, 1);
    d2w_ = fd_weights(0.0, x2, 2);
}

template <typename Vec>
static typename Vec::Scalar wall_apply(const Eigen::VectorXd& w, const Vec& f, int wall, int n) {
    typename Vec::Scalar acc(0);
    for (int s = 0; s < w.size(); ++s)
        acc += w(s) * (wall == 0 ? f(s) : f(n - 1 - s));
    return acc;
}

double ZOps::wall_d1(const Eigen::VectorXd& f, int wall) const {
    return (wall == 0 ? 1.0 : -1.0) * wall_apply(d1w_, f, wall, n_);
}
double ZOps::wall_d2(const Eigen::VectorXd& f, int wall) const {
    return wall_apply(d2w_, f, wall, n_);
}
std::complex<double> ZOps::wall_d1(const Eigen::VectorXcd& f, int wall) const {
    return (wall == 0 ? 1.0 : -1.0) * wall_apply(d1w_, f, wall, n_);
}
std::complex<double> ZOps::wall_d2(const Eigen::VectorXcd& f, int wall) const {
    return wall_apply(d2w_, f, wall, n_);
}

}  // namespace iwbl
