#include "cbrlab/grwp.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "cbrlab/constants.hpp"

namespace cbr {

CslParams CslParams::make(double alpha, double zeta, double D0, double S_i, double n) {
    CslParams p{alpha, zeta, zeta * std::pow(alpha / (4.0 * M_PI), 1.5), D0, S_i, n};
    p.validate();
    return p;
}

void CslParams::validate() const {
    if (!(alpha > 0.0)) throw ValidationError("CslParams.alpha: must be positive");
    if (!(zeta > 0.0)) throw ValidationError("CslParams.zeta: must be positive");
    if (!(D0 > 0.0)) throw ValidationError("CslParams.D0: must be positive");
    if (!(S_i > 0.0)) throw ValidationError("CslParams.S_i: must be positive");
    if (!(n >= 1.0)) throw ValidationError("CslParams.n: must be >= 1");
    const double expected = zeta * std::pow(alpha / (4.0 * M_PI), 1.5);
    if (std::abs(lambda_micro - expected) > 1e-10 * expected)
        throw ValidationError("CslParams.lambda_micro: must equal zeta (alpha/4pi)^{3/2}");
}

double qmsl_density_eigenvalue(const Vec3& x, const std::vector<Vec3>& positions, double alpha) {
    if (!(alpha > 0.0)) throw ValidationError("qmsl_density_eigenvalue: alpha must be positive");
    const double norm = std::pow(alpha / (2.0 * M_PI), 1.5);
    double s = 0.0;
    for (const Vec3& q : positions) s += std::exp(-0.5 * alpha * (x - q).squaredNorm());
    return norm * s;
}

double csl_F(const Vec3& Q_minus_x, const std::vector<Vec3>& offsets, double alpha) {
    if (!(alpha > 0.0)) throw ValidationError("csl_F: alpha must be positive");
    const double norm = std::pow(alpha / (2.0 * M_PI), 1.5);
    double s = 0.0;
    for (const Vec3& q : offsets) s += std::exp(-0.5 * alpha * (Q_minus_x + q).squaredNorm());
    return norm * s;
}

double csl_F_macroscopic(const Vec3& Q_minus_x, const SlabProfile& profile, double alpha) {
    if (!(alpha > 0.0)) throw ValidationError("csl_F_macroscopic: alpha must be positive");
    if (!(profile.density >= 0.0) || !(profile.half_extent.minCoeff() > 0.0))
        throw ValidationError("csl_F_macroscopic: invalid profile");
    // separable kernel: product of three 1-D Gaussian integrals over the box,
    // each restricted to the kernel support so narrow kernels stay resolved
    using gauss = boost::math::quadrature::gauss<double, 64>;
    const double norm1 = std::sqrt(alpha / (2.0 * M_PI));
    const double reach = 10.0 / std::sqrt(alpha);
    double F = profile.density;
    for (int axis = 0; axis < 3; ++axis) {
        const double u = Q_minus_x(axis);
        const double a = profile.half_extent(axis);
        const double lo = std::max(-a, -u - reach);
        const double hi = std::min(a, -u + reach);
        if (lo >= hi) return 0.0;
        auto f = [&](double y) { return std::exp(-0.5 * alpha * (u + y) * (u + y)); };
        F *= norm1 * gauss::integrate(f, lo, hi);
    }
    return F;
}

double delta_i(const CslParams& csl) {
    csl.validate();
    return std::sqrt(csl.alpha / M_PI) * csl.D0 * csl.D0 * csl.S_i;
}

double macro_frequency(const CslParams& csl, double n_out) {
    csl.validate();
    if (n_out < 0.0) throw ValidationError("macro_frequency: n_out must be >= 0");
    return csl.zeta * csl.D0 * n_out;
}

double lambda_cm(double n, double lambda_micro) {
    if (!(n >= 1.0)) throw ValidationError("lambda_cm: n must be >= 1");
    if (!(lambda_micro > 0.0)) throw ValidationError("lambda_cm: lambda_micro must be positive");
    return n * lambda_micro;
}

Spreading csl_spreading(double t, const CslParams& csl, double M, const Spreading& schrodinger) {
    csl.validate();
    if (t < 0.0) throw ValidationError("csl_spreading: t must be >= 0");
    if (!(M > 0.0)) throw ValidationError("csl_spreading: M must be positive");
    const double hbar = cgs_constants().hbar;
    const double zd = csl.zeta * delta_i(csl) * hbar * hbar;
    return {schrodinger.Q2 + zd * t * t * t / (6.0 * M * M), schrodinger.P2 + 0.5 * zd * t};
}

double csl_energy_rate(const CslParams& csl, double M) {
    csl.validate();
    if (!(M > 0.0)) throw ValidationError("csl_energy_rate: M must be positive");
    const double hbar = cgs_constants().hbar;
    return csl.zeta * std::sqrt(csl.alpha / M_PI) * csl.D0 * csl.D0 * hbar * hbar / M;
}

}  // namespace cbr
