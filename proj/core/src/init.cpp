#include "iwbl/init.hpp"

#include <cmath>

#include "iwbl/errors.hpp"
#include "iwbl/z_ops.hpp"

namespace iwbl {

namespace {

constexpr cplx I{0.0, 1.0};

// Installs profile/2 at mode k and the conjugate at -k (the coefficients of
// profile(z or eta) * cos(k.x) for a real profile).
void set_cos_mode(Eigen::MatrixXcd& f, const ModeBox& box, int kx, int ky,
                  const Eigen::VectorXcd& profile) {
    f.col(box.flat(kx, ky)) += 0.5 * profile;
    f.col(box.flat(-kx, -ky)) += 0.5 * profile.conjugate();
}

}  // namespace

void InitParams::validate(const GridSpec& g) const {
    if (!(amplitude == amplitude))  // NaN guard
        throw ConfigError("init: amplitude is NaN");
    if (recipe != "zero" && (kx == 0 && ky == 0))
        throw ConfigError("init: recipe requires a nonzero mode (kx, ky)");
    if (std::abs(kx) > g.Kx() || std::abs(ky) > g.Ky())
        throw ConfigError("init: mode (kx, ky) outside the retained box");
    if (!(decay > 0.0)) throw ConfigError("init: decay rate must be > 0");
}

BulkState make_bulk_init(const InitParams& p, const GridSpec& g) {
    p.validate(g);
    BulkState s(g);
    if (p.recipe == "zero") return s;

    const int nz = g.Nz;
    Eigen::VectorXd z(nz);
    for (int j = 0; j < nz; ++j) z(j) = double(j) / (nz - 1);
    const double k2 = double(p.kx) * p.kx + double(p.ky) * p.ky;

    Eigen::VectorXd theta(nz), w(nz);
    if (p.recipe == "bulk-single-mode") {
        theta = (M_PI * z.array()).cos();
        w = z.array().square() * (1.0 - z.array()).square();
    } else if (p.recipe == "bulk-invariant") {
        theta = (M_PI * z.array()).sin();
        w = (M_PI * z.array()).sin();
    } else if (p.recipe == "bulk-scaling") {
        theta.setOnes();
        w = z.array().cube() * (1.0 - z.array()).cube();
    } else {
        throw ConfigError("init: unknown bulk recipe '" + p.recipe + "'");
    }
    theta *= p.amplitude;
    w *= p.amplitude;
    w(0) = w(nz - 1) = 0.0;  // impermeability, exact

    // v parallel to k from the discrete divergence constraint:
    // i k . v + D w = 0 with v = alpha k  =>  alpha = i D w / |k|^2
    ZOps zops(nz);
    Eigen::VectorXcd dw = (zops.D() * w).cast<cplx>();
    Eigen::VectorXcd alpha = (I / k2) * dw;

    set_cos_mode(s.theta, s.box, p.kx, p.ky, theta.cast<cplx>());
    set_cos_mode(s.w, s.box, p.kx, p.ky, w.cast<cplx>());
    set_cos_mode(s.vx, s.box, p.kx, p.ky, (double(p.kx) * alpha).eval());
    set_cos_mode(s.vy, s.box, p.kx, p.ky, (double(p.ky) * alpha).eval());
    s.enforce_hermitian();
    return s;
}

BLState make_bl_init(const InitParams& p, const GridSpec& g) {
    p.validate(g);
    BLState s(g);
    if (p.recipe == "zero") return s;

    const int n = g.Neta;
    Eigen::VectorXd eta(n);
    for (int j = 0; j < n; ++j) eta(j) = g.L_eta * j / (n - 1);
    Eigen::VectorXd decay = (-p.decay * eta.array()).exp();

    if (p.recipe == "bl-exp") {
        Eigen::VectorXcd theta = (p.amplitude * decay.array()).cast<cplx>();
        set_cos_mode(s.theta, s.box, p.kx, p.ky, theta);
    } else if (p.recipe == "bl-poly-exp") {
        Eigen::VectorXcd theta = (p.amplitude * decay.array()).cast<cplx>();
        Eigen::VectorXcd vx =
            (p.amplitude * (1.0 - p.decay * eta.array()) * decay.array())
                .cast<cplx>();
        set_cos_mode(s.theta, s.box, p.kx, p.ky, theta);
        set_cos_mode(s.vx, s.box, p.kx, p.ky, vx);
        // exact zero of the truncated compatibility integral
        EtaOps ops(g);
        project_compatibility(s, ops);
    } else {
        throw ConfigError("init: unknown boundary-layer recipe '" + p.recipe +
                          "'");
    }
    s.enforce_hermitian();
    return s;
}

}  // namespace iwbl
