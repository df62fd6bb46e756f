/// @file eta_ops.cpp
#include "iwbl/eta_ops.hpp"

#include <algorithm>

#include "iwbl/errors.hpp"

namespace iwbl {

Eigen::VectorXd fd_weights(double z, const Eigen::VectorXd& x, int m) {
    // B. Fornberg, "Generation of finite difference formulas on arbitrarily
    // spaced grids", Math. Comp. 51 (1988).
    const int nd = static_cast<int>(x.size()) - 1;
    Eigen::MatrixXd c(nd + 1, m + 1);
    c.setZero();
    double c1 = 1.0, c4 = x(0) - z;
    c(0, 0) = 1.0;
    for (int i = 1; i <= nd; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = x(i) - z;
        for (int j = 0; j < i; ++j) {
            double c3 = x(i) - x(j);
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c.col(m);
}

EtaOps::EtaOps(int n, double length) : n_(n), length_(length), h_(length / (n - 1)) {
    if (n < 8) throw ConfigError("EtaOps: need at least 8 nodes, got " + std::to_string(n));
    if (!(length > 0)) throw ConfigError("EtaOps: length must be positive");
    w_.resize(n);
    w_.setConstant(h_);
    w_(0) = w_(n - 1) = 0.5 * h_;
}

template <typename Vec>
static Vec cum_up(const Vec& f, double h, int n) {
    Vec u(n);
    u(0) = typename Vec::Scalar(0);
    for (int j = 1; j < n; ++j) u(j) = u(j - 1) + 0.5 * h * (f(j - 1) + f(j));
    return u;
}

Eigen::VectorXcd EtaOps::integral_up(const Eigen::VectorXcd& f) const {
    return cum_up(f, h_, n_);
}
Eigen::VectorXd EtaOps::integral_up(const Eigen::VectorXd& f) const {
    return cum_up(f, h_, n_);
}

template <typename Vec>
static Vec tail_from_up(const Vec& f, double h, int n) {
    Vec u = cum_up(f, h, n);
    // total computed as the last cumulative entry => exact additivity and
    // tail(L) = 0 in floating point.
    typename Vec::Scalar total = u(n - 1);
    Vec t(n);
    for (int j = 0; j < n; ++j) t(j) = total - u(j);
    return t;
}

Eigen::VectorXcd EtaOps::integral_tail(const Eigen::VectorXcd& f) const {
    return tail_from_up(f, h_, n_);
}
Eigen::VectorXd EtaOps::integral_tail(const Eigen::VectorXd& f) const {
    return tail_from_up(f, h_, n_);
}

Eigen::VectorXcd EtaOps::integral_tail_adjoint(const Eigen::VectorXcd& f) const {
    // T* = W^{-1} U^T W: reverse cumulative trapezoid with endpoint tweaks
    //   T*(f)_0 = tail(f)_0 - (h/2) f_0,   T*(f)_{n-1} = (h/2) f_{n-1}.
    Eigen::VectorXcd t = integral_tail(f);
    t(0) -= 0.5 * h_ * f(0);
    t(n_ - 1) = 0.5 * h_ * f(n_ - 1);
    return t;
}

const std::vector<std::pair<int, Eigen::VectorXd>>& EtaOps::stencils(int m) const {
    if (static_cast<int>(stencil_cache_.size()) <= m) stencil_cache_.resize(m + 1);
    auto& cache = stencil_cache_[m];
    if (!cache.empty()) return cache;
    // 4th-order accuracy: stencil width m + 4 (m+4 points reproduce
    // polynomials of degree m+3 => error O(h^4)).
    const int width = std::min(m + 4 + (m % 2 == 0 ? 1 : 0), n_);
    cache.resize(n_);
    for (int j = 0; j < n_; ++j) {
        int first = std::clamp(j - width / 2, 0, n_ - width);
        Eigen::VectorXd x(width);
        for (int s = 0; s < width; ++s) x(s) = node(first + s);
        cache[j] = {first, fd_weights(node(j), x, m)};
    }
    return cache;
}

template <typename Vec>
static Vec apply_stencils(const std::vector<std::pair<int, Eigen::VectorXd>>& st, const Vec& f) {
    Vec out(f.size());
    for (int j = 0; j < f.size(); ++j) {
        const auto& [first, wts] = st[j];
        typename Vec::Scalar acc(0);
        for (int s = 0; s < wts.size(); ++s) acc += wts(s) * f(first + s);
        out(j) = acc;
    }
    return out;
}

Eigen::VectorXcd EtaOps::derivative(const Eigen::VectorXcd& f, int m) const {
    if (m == 0) return f;
    return apply_stencils(stencils(m), f);
}
Eigen::VectorXd EtaOps::derivative(const Eigen::VectorXd& f, int m) const {
    if (m == 0) return f;
    return apply_stencils(stencils(m), f);
}

bool EtaOps::decay_violated(const Eigen::VectorXcd& f, double threshold) const {
    double mx = f.cwiseAbs().maxCoeff();
    return mx > 0 && std::abs(f(n_ - 1)) > threshold * mx;
}

}  // namespace iwbl
