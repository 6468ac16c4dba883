#pragma once

#include <cstddef>

#include "cbrlab/constants.hpp"
#include "cbrlab/errors.hpp"

namespace cbr {

// Normalized Lorentzian frequency distribution centered at omega_center with
// half-width 1/tau_c: integral over the whole real line is 1.
struct LorentzianSpectrum {
    double omega_center = 1.0;  // rad/s
    double tau_c = 0.05;        // s

    void validate() const {
        if (!(omega_center > 0.0)) throw ValidationError("LorentzianSpectrum.omega_center: must be positive");
        if (!(tau_c > 0.0)) throw ValidationError("LorentzianSpectrum.tau_c: must be positive");
    }
};

// Dimensionless groups controlling the temperature integral:
//   p = hbar*omega/(k_B T), xi = omega*tau_c, gamma_ratio = p/xi.
struct ThermalParams {
    double p;
    double xi;
    double gamma_ratio;

    static ThermalParams make(double p, double xi);
    void validate() const;
};

ThermalParams thermal_params_of(const LorentzianSpectrum& spec, double T,
                                const PhysicalConstants& consts = cgs_constants());

double lorentzian_density(double Omega, const LorentzianSpectrum& spec);

// Thermal photon occupation 1/(exp(hbar*Omega/(k_B T)) - 1). Omega = 0 is a
// domain error (Planck divergence).
double planck_occupation(double Omega, double T,
                         const PhysicalConstants& consts = cgs_constants());

// Occupation from the dimensionless ratio p = hbar*Omega/(k_B T).
double occupation_from_ratio(double p);

// Temperature integral  I = \int dOmega Gamma(Omega) (1 + 2<n>_Omega).
//
// The Bose factor continues through coth(beta hbar Omega / 2), odd in Omega,
// so pairing Omega with -Omega removes the Planck divergence analytically and
// the integral is the principal value over the whole line - the same object
// the residue evaluation computes. omega_min places a quadrature split point
// inside the excised-divergence region (the value is omega_min-independent up
// to the quadrature tolerance). For narrow spectra (omega tau_c >> 1) the
// T -> 0 value approaches the Lorentzian normalization, 1.
// Adaptive Gauss-Kronrod; throws NumericalError (carrying the best estimate
// and error bound) if the absolute-error target tol is not met.
double integral_I_quadrature(const LorentzianSpectrum& spec, double T, double omega_min,
                             double tol, const PhysicalConstants& consts = cgs_constants());

// Same integral by the contour/residue series: the Lorentzian pole term plus
// the Matsubara ladder of the Bose factor, with the half-weighted n = 0 pole
// on the contour. n_terms terms are summed explicitly (descending magnitude,
// compensated); the remainder is resummed exactly from the large-n form of
// the terms via the digamma function. The imaginary part of the contour sum
// must cancel below 1e-10 or a NumericalError is thrown.
// Requires xi/p < 1 (RegimeError otherwise).
double integral_I_residue(const ThermalParams& tp, std::size_t n_terms);

// Closed approximation 1 + 2<n>_omega.
double integral_I_approx(double omega, double T,
                         const PhysicalConstants& consts = cgs_constants());

}  // namespace cbr
