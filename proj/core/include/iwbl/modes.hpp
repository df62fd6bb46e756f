/// @file modes.hpp
/// @brief Flat indexing of the retained horizontal mode box, shared by the
///        bulk and boundary-layer states (profiles stored as one column per
///        retained mode).
#pragma once

#include <cstdlib>
#include <utility>

namespace iwbl {

struct ModeBox {
    int kx_max = 0;
    int ky_max = 0;

    int n_modes() const { return (2 * kx_max + 1) * (2 * ky_max + 1); }
    bool retained(int kx, int ky) const {
        return std::abs(kx) <= kx_max && std::abs(ky) <= ky_max;
    }
    int flat(int kx, int ky) const {
        return (kx + kx_max) + (2 * kx_max + 1) * (ky + ky_max);
    }
    std::pair<int, int> mode_of(int idx) const {
        int nx = 2 * kx_max + 1;
        return {idx % nx - kx_max, idx / nx - ky_max};
    }
    /// Canonical half of the box (the other half is the Hermitian mirror).
    bool canonical(int kx, int ky) const { return kx > 0 || (kx == 0 && ky >= 0); }

    bool operator==(const ModeBox&) const = default;
};

}  // namespace iwbl
