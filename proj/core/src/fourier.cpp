/// @file fourier.cpp
/// @brief FFTW c2c transform wrappers for the dealiased horizontal box.
#include "iwbl/fourier.hpp"

#include <fftw3.h>

#include <cstring>

namespace iwbl {

struct FourierTransform2D::Impl {
    fftw_complex* buf_in = nullptr;
    fftw_complex* buf_out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

FourierTransform2D::FourierTransform2D(const GridSpec& grid)
    : nx_(grid.Nx), ny_(grid.Ny), kx_max_(grid.Kx()), ky_max_(grid.Ky()),
      impl_(std::make_unique<Impl>()) {
    grid.validate();
    const size_t n = static_cast<size_t>(nx_) * ny_;
    impl_->buf_in = fftw_alloc_complex(n);
    impl_->buf_out = fftw_alloc_complex(n);
    // Row-major (x index major) layout: element (i, j) at i*ny + j.
    impl_->fwd = fftw_plan_dft_2d(nx_, ny_, impl_->buf_in, impl_->buf_out,
                                  FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_2d(nx_, ny_, impl_->buf_in, impl_->buf_out,
                                  FFTW_BACKWARD, FFTW_ESTIMATE);
}

FourierTransform2D::~FourierTransform2D() {
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
    fftw_free(impl_->buf_in);
    fftw_free(impl_->buf_out);
}

SpectralField2D FourierTransform2D::forward(const PhysField& samples) {
    if (samples.rows() != nx_ || samples.cols() != ny_)
        throw ConfigError("forward_transform: sample array is " +
                          std::to_string(samples.rows()) + "x" + std::to_string(samples.cols()) +
                          ", grid expects " + std::to_string(nx_) + "x" + std::to_string(ny_));
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) {
            impl_->buf_in[i * ny_ + j][0] = samples(i, j);
            impl_->buf_in[i * ny_ + j][1] = 0.0;
        }
    fftw_execute(impl_->fwd);
    const double scale = 1.0 / (static_cast<double>(nx_) * ny_);
    SpectralField2D out(kx_max_, ky_max_);
    for (int kx = -kx_max_; kx <= kx_max_; ++kx)
        for (int ky = -ky_max_; ky <= ky_max_; ++ky) {
            int i = (kx + nx_) % nx_;
            int j = (ky + ny_) % ny_;
            const auto& v = impl_->buf_out[i * ny_ + j];
            out.at(kx, ky) = scale * cplx(v[0], v[1]);
        }
    return out;
}

PhysField FourierTransform2D::inverse(const SpectralField2D& f) {
    if (f.kx_max() != kx_max_ || f.ky_max() != ky_max_)
        throw ConfigError("inverse transform: field box (" + std::to_string(f.kx_max()) + "," +
                          std::to_string(f.ky_max()) + ") does not match grid box (" +
                          std::to_string(kx_max_) + "," + std::to_string(ky_max_) + ")");
    const size_t n = static_cast<size_t>(nx_) * ny_;
    std::memset(impl_->buf_in, 0, n * sizeof(fftw_complex));
    for (int kx = -kx_max_; kx <= kx_max_; ++kx)
        for (int ky = -ky_max_; ky <= ky_max_; ++ky) {
            int i = (kx + nx_) % nx_;
            int j = (ky + ny_) % ny_;
            impl_->buf_in[i * ny_ + j][0] = f.at(kx, ky).real();
            impl_->buf_in[i * ny_ + j][1] = f.at(kx, ky).imag();
        }
    fftw_execute(impl_->bwd);
    PhysField out(nx_, ny_);
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) out(i, j) = impl_->buf_out[i * ny_ + j][0];
    return out;
}

SpectralField2D FourierTransform2D::dealiased_product(const SpectralField2D& a,
                                                      const SpectralField2D& b) {
    PhysField pa = inverse(a);
    PhysField pb = inverse(b);
    PhysField prod = pa * pb;
    return forward(prod);
}

}  // namespace iwbl
