/// @file grid.hpp
/// @brief Grid description: horizontal Fourier box on the periodic square,
///        wall-bounded vertical z-grid, and semi-infinite boundary-layer
///        eta-grid truncated at eta = L_eta.
///
/// Horizontal domain is the 2-pi periodic square sampled on Nx x Ny collocation
/// points.  Products are dealiased by the 2/3 rule: only modes with
/// |kx| <= Kx, |ky| <= Ky are retained, with the cutoff chosen so that alias
/// images of products of retained modes fall strictly outside the retained box.
#pragma once

#include <cmath>
#include <string>

#include "iwbl/errors.hpp"

namespace iwbl {

struct GridSpec {
    int Nx = 16;                    ///< horizontal collocation points (x), even, >= 4
    int Ny = 16;                    ///< horizontal collocation points (y), even, >= 4
    int Nz = 65;                    ///< wall-normal nodes on [0,1] (bulk), >= 24
    int Neta = 129;                 ///< boundary-layer nodes on [0, L_eta], >= 8
    double L_eta = 16.0;            ///< boundary-layer truncation length
    double dealias_fraction = 2.0 / 3.0;

    /// Dealias cutoff for one direction.  K = floor(fraction*N/2), additionally
    /// capped at floor((N-1)/3) so that for the default 2/3 rule the aliased
    /// image of any product of retained modes (|k| <= 2K) lands at |k'| >= N-2K
    /// > K, i.e. strictly outside the retained set, even at boundary cases
    /// such as N = 12.
    static int cutoff(int n, double fraction) {
        int k = static_cast<int>(std::floor(fraction * n / 2.0));
        int cap = (n - 1) / 3;
        return k < cap ? k : cap;
    }

    int Kx() const { return cutoff(Nx, dealias_fraction); }
    int Ky() const { return cutoff(Ny, dealias_fraction); }

    double dz() const { return 1.0 / (Nz - 1); }
    double deta() const { return L_eta / (Neta - 1); }

    void validate() const {
        auto fail = [](const std::string& m) { throw ConfigError("GridSpec: " + m); };
        if (Nx < 4 || Nx % 2 != 0) fail("Nx must be even and >= 4, got " + std::to_string(Nx));
        if (Ny < 4 || Ny % 2 != 0) fail("Ny must be even and >= 4, got " + std::to_string(Ny));
        if (Nz < 24) fail("Nz must be >= 24 (two wall-closure blocks), got " + std::to_string(Nz));
        if (Neta < 8) fail("Neta must be >= 8, got " + std::to_string(Neta));
        if (!(L_eta > 0)) fail("L_eta must be positive");
        if (!(dealias_fraction > 0) || dealias_fraction > 1.0)
            fail("dealias_fraction must lie in (0, 1]");
        if (Kx() < 1 || Ky() < 1) fail("dealias cutoff is empty; increase Nx/Ny");
    }
};

}  // namespace iwbl
