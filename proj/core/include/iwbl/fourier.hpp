/// @file fourier.hpp
/// @brief FFTW-backed transforms between collocation samples and the retained
///        (dealiased) Fourier box, plus the dealiased pointwise product.
#pragma once

#include <Eigen/Dense>
#include <memory>

#include "iwbl/grid.hpp"
#include "iwbl/spectral_field.hpp"

namespace iwbl {

/// Physical samples: row index i is x_i = 2 pi i / Nx, column j is y_j.
using PhysField = Eigen::ArrayXXd;

/// Plans FFTs once per (Nx, Ny) and reuses internal buffers.  Not thread-safe.
class FourierTransform2D {
  public:
    explicit FourierTransform2D(const GridSpec& grid);
    ~FourierTransform2D();
    FourierTransform2D(const FourierTransform2D&) = delete;
    FourierTransform2D& operator=(const FourierTransform2D&) = delete;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int kx_max() const { return kx_max_; }
    int ky_max() const { return ky_max_; }

    /// Collocation samples -> retained Fourier coefficients (modes outside the
    /// dealias box are discarded).
    SpectralField2D forward(const PhysField& samples);

    /// Retained coefficients -> collocation samples (exact band-limited
    /// evaluation; imaginary residue of a Hermitian input is dropped).
    PhysField inverse(const SpectralField2D& f);

    /// Dealiased product: 2/3-rule pointwise product of two retained fields.
    /// Exact spectral convolution on the retained set (aliasing cannot pollute
    /// retained modes by the cutoff choice in GridSpec).
    SpectralField2D dealiased_product(const SpectralField2D& a, const SpectralField2D& b);

  private:
    int nx_, ny_, kx_max_, ky_max_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace iwbl
