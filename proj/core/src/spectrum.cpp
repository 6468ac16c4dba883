#include "cbrlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cbr {

namespace {

using cplx = std::complex<double>;

// Digamma for complex argument: upward recurrence into the asymptotic region,
// then the standard Bernoulli expansion.
cplx digamma(cplx z) {
    cplx acc = 0.0;
    while (z.real() < 16.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    const cplx inv = 1.0 / z;
    const cplx inv2 = inv * inv;
    cplx s = std::log(z) - 0.5 * inv;
    s -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return s + acc;
}

// Neumaier-compensated sum.
cplx compensated_sum(std::vector<cplx>& terms) {
    std::sort(terms.begin(), terms.end(),
              [](const cplx& a, const cplx& b) { return std::abs(a) > std::abs(b); });
    double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
    auto add = [](double& s, double& c, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    };
    for (const cplx& t : terms) {
        add(sr, cr, t.real());
        add(si, ci, t.imag());
    }
    return {sr + cr, si + ci};
}

}  // namespace

ThermalParams ThermalParams::make(double p, double xi) {
    ThermalParams tp{p, xi, p / xi};
    tp.validate();
    return tp;
}

void ThermalParams::validate() const {
    if (!(p > 0.0) || !std::isfinite(p)) throw ValidationError("ThermalParams.p: must be finite and positive");
    if (!(xi > 0.0) || !std::isfinite(xi)) throw ValidationError("ThermalParams.xi: must be finite and positive");
    if (std::abs(gamma_ratio - p / xi) > 1e-12 * std::abs(gamma_ratio))
        throw ValidationError("ThermalParams.gamma_ratio: must equal p/xi");
}

ThermalParams thermal_params_of(const LorentzianSpectrum& spec, double T,
                                const PhysicalConstants& consts) {
    spec.validate();
    if (!(T > 0.0)) throw ValidationError("thermal_params_of: T must be positive");
    return ThermalParams::make(consts.hbar * spec.omega_center / (consts.k_B * T),
                               spec.omega_center * spec.tau_c);
}

double lorentzian_density(double Omega, const LorentzianSpectrum& spec) {
    spec.validate();
    const double u = spec.tau_c * (Omega - spec.omega_center);
    return spec.tau_c / (M_PI * (u * u + 1.0));
}

double planck_occupation(double Omega, double T, const PhysicalConstants& consts) {
    if (!(Omega > 0.0))
        throw ValidationError("planck_occupation: Omega must be positive (Planck divergence at 0)");
    if (T < 0.0) throw ValidationError("planck_occupation: T must be non-negative");
    if (T == 0.0) return 0.0;
    return occupation_from_ratio(consts.hbar * Omega / (consts.k_B * T));
}

double occupation_from_ratio(double p) {
    if (!(p > 0.0)) throw ValidationError("occupation_from_ratio: ratio must be positive");
    if (p > 700.0) return 0.0;
    return 1.0 / std::expm1(p);
}

double integral_I_quadrature(const LorentzianSpectrum& spec, double T, double omega_min,
                             double tol, const PhysicalConstants& consts) {
    spec.validate();
    if (!(omega_min > 0.0)) throw ValidationError("integral_I_quadrature: omega_min must be positive");
    if (!(tol > 0.0)) throw ValidationError("integral_I_quadrature: tol must be positive");
    if (T < 0.0) throw ValidationError("integral_I_quadrature: T must be non-negative");

    const double beta_hbar = T > 0.0 ? consts.hbar / (consts.k_B * T) : 0.0;

    // Pair Omega with -Omega: (1 + 2<n>) continues to coth(beta hbar Omega/2),
    // odd in Omega, so the pair integrand [Gamma(O) - Gamma(-O)]*coth(.) is
    // regular at 0 and the principal value over the line becomes an ordinary
    // integral over (0, inf). omega_min only places a quadrature split point
    // inside the excised-divergence region.
    auto paired = [&](double O) {
        const double gp = lorentzian_density(O, spec);
        const double gm = lorentzian_density(-O, spec);
        double coth = 1.0;
        if (T > 0.0) {
            const double u = beta_hbar * O;
            coth = u > 700.0 ? 1.0 : 1.0 + 2.0 / std::expm1(u);
        } else if (O == 0.0) {
            return 0.0;
        }
        return (gp - gm) * coth;
    };

    using quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    double err1 = 0.0, err2 = 0.0, err3 = 0.0;
    const double split = std::max(2.0 * spec.omega_center, omega_min * 2.0);
    const double v1 = quad::integrate(paired, 0.0, omega_min, 20, tol / 6.0, &err1);
    const double v2 = quad::integrate(paired, omega_min, split, 20, tol / 6.0, &err2);
    const double v3 = quad::integrate(paired, split, std::numeric_limits<double>::infinity(),
                                      20, tol / 6.0, &err3);
    const double value = v1 + v2 + v3;
    const double err = err1 + err2 + err3;
    if (!(err <= tol) || !std::isfinite(value))
        throw NumericalError("integral_I_quadrature: error target not met", value, err);
    return value;
}

double integral_I_residue(const ThermalParams& tp, std::size_t n_terms) {
    tp.validate();
    if (n_terms < 1) throw ValidationError("integral_I_residue: n_terms must be >= 1");
    if (tp.xi / tp.p >= 1.0)
        throw RegimeError("integral_I_residue: requires xi/p < 1 (validity condition)");

    const double p = tp.p, xi = tp.xi;
    const double gamma = tp.gamma_ratio;     // p/xi
    const double kappa = 2.0 * M_PI / gamma; // Matsubara spacing in x = Omega*tau_c

    // Lorentzian pole at x = xi + i: residue term 1/(exp(p + i*gamma) - 1),
    // evaluated in the overflow-safe form.
    const cplx em = std::exp(cplx(-p, -gamma));
    const cplx pole_term = em / (1.0 - em);

    // Matsubara ladder x_n = i*kappa*n: terms 1/D_n with
    // D_n = (1 + xi^2 - a^2) - 2i*xi*a, a = kappa*n; n = 0 carries weight 1/2.
    std::vector<cplx> terms;
    terms.reserve(n_terms + 1);
    terms.emplace_back(0.5 / cplx(1.0 + xi * xi, 0.0));
    for (std::size_t n = 1; n <= n_terms; ++n) {
        const double a = kappa * static_cast<double>(n);
        terms.emplace_back(1.0 / cplx(1.0 + xi * xi - a * a, -2.0 * xi * a));
    }
    cplx ladder = compensated_sum(terms);

    // Exact tail: D_n = -kappa^2 (n - r1)(n - r2) with r1 = (1 - i xi)/kappa,
    // r2 = -(1 + i xi)/kappa, so sum_{n>N} 1/D_n telescopes to digammas.
    const cplx r1 = cplx(1.0, -xi) / kappa;
    const cplx r2 = cplx(-1.0, -xi) / kappa;
    const double N = static_cast<double>(n_terms);
    ladder += -(1.0 / (2.0 * kappa)) * (digamma(N + 1.0 - r2) - digamma(N + 1.0 - r1));

    const cplx contour = pole_term + cplx(0.0, 2.0 / gamma) * ladder;
    if (std::abs(contour.imag()) > 1e-10)
        throw NumericalError("integral_I_residue: contour sum imaginary part did not cancel",
                             1.0 + 2.0 * contour.real(), std::abs(contour.imag()));
    return 1.0 + 2.0 * contour.real();
}

double integral_I_approx(double omega, double T, const PhysicalConstants& consts) {
    if (!(omega > 0.0)) throw ValidationError("integral_I_approx: omega must be positive");
    if (T < 0.0) throw ValidationError("integral_I_approx: T must be non-negative");
    if (T == 0.0) return 1.0;
    return 1.0 + 2.0 * planck_occupation(omega, T, consts);
}

}  // namespace cbr
