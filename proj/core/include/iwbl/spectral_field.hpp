/// @file spectral_field.hpp
/// @brief Dense storage for the retained horizontal Fourier modes of a real
///        scalar field on the periodic square.
///
/// Convention: f(x,y) = sum_{|kx|<=Kx, |ky|<=Ky} c(kx,ky) e^{i(kx x + ky y)},
/// so for real fields c(-kx,-ky) = conj(c(kx,ky)).  L2 norms are over the
/// non-normalized 2-pi square: ||f||^2 = (2 pi)^2 sum |c|^2.
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "iwbl/errors.hpp"

namespace iwbl {

using cplx = std::complex<double>;

class SpectralField2D {
  public:
    SpectralField2D() : kx_max_(0), ky_max_(0), c_(1, 1) { c_.setZero(); }
    SpectralField2D(int kx_max, int ky_max)
        : kx_max_(kx_max), ky_max_(ky_max), c_(2 * kx_max + 1, 2 * ky_max + 1) {
        c_.setZero();
    }

    int kx_max() const { return kx_max_; }
    int ky_max() const { return ky_max_; }
    int n_modes() const { return static_cast<int>(c_.size()); }

    bool retained(int kx, int ky) const {
        return std::abs(kx) <= kx_max_ && std::abs(ky) <= ky_max_;
    }

    cplx& at(int kx, int ky) { return c_(kx + kx_max_, ky + ky_max_); }
    const cplx& at(int kx, int ky) const { return c_(kx + kx_max_, ky + ky_max_); }

    Eigen::MatrixXcd& raw() { return c_; }
    const Eigen::MatrixXcd& raw() const { return c_; }

    /// Flat index of mode (kx, ky); column-major over the retained box.
    int flat(int kx, int ky) const {
        return (kx + kx_max_) + (2 * kx_max_ + 1) * (ky + ky_max_);
    }
    /// Inverse of flat().
    std::pair<int, int> mode_of(int flat_idx) const {
        int nx = 2 * kx_max_ + 1;
        return {flat_idx % nx - kx_max_, flat_idx / nx - ky_max_};
    }

    /// Projects onto the real-field subspace: c(-k) = conj(c(k)).
    void enforce_hermitian() {
        for (int kx = -kx_max_; kx <= kx_max_; ++kx)
            for (int ky = -ky_max_; ky <= ky_max_; ++ky) {
                if (kx < 0 || (kx == 0 && ky < 0)) continue;
                cplx avg = 0.5 * (at(kx, ky) + std::conj(at(-kx, -ky)));
                at(kx, ky) = avg;
                at(-kx, -ky) = std::conj(avg);
            }
        at(0, 0) = cplx(at(0, 0).real(), 0.0);
    }

    /// Max deviation from Hermitian symmetry.
    double hermitian_defect() const {
        double d = 0.0;
        for (int kx = -kx_max_; kx <= kx_max_; ++kx)
            for (int ky = -ky_max_; ky <= ky_max_; ++ky)
                d = std::max(d, std::abs(at(kx, ky) - std::conj(at(-kx, -ky))));
        return d;
    }

    double l2_norm() const { return 2.0 * M_PI * c_.norm(); }  ///< ||f||_{L2(T^2)}
    double max_abs_coeff() const { return c_.cwiseAbs().maxCoeff(); }

  private:
    int kx_max_, ky_max_;
    Eigen::MatrixXcd c_;
};

}  // namespace iwbl
