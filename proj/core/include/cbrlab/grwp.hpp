#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cbrlab/errors.hpp"

namespace cbr {

using Vec3 = Eigen::Vector3d;

// GRWP/CSL baseline parameters in CGS.
struct CslParams {
    double alpha;         // localization 1/width^2, 1/cm^2
    double zeta;          // strength, cm^3/s
    double lambda_micro;  // zeta (alpha/4pi)^{3/2}, 1/s
    double D0;            // number density, 1/cm^3
    double S_i;           // transverse cross-section, cm^2
    double n;             // particle count

    static CslParams make(double alpha, double zeta, double D0, double S_i, double n);
    void validate() const;
};

// Locally averaged number-density eigenvalue
// n_x = (alpha/2pi)^{3/2} sum_i exp(-alpha (x - q_i)^2 / 2).
double qmsl_density_eigenvalue(const Vec3& x, const std::vector<Vec3>& positions, double alpha);

// F(Q - x) as a sum of Gaussians over internal offsets.
double csl_F(const Vec3& Q_minus_x, const std::vector<Vec3>& offsets, double alpha);

// Uniform box density profile: D(y) = density for |y_i| <= half_extent_i.
struct SlabProfile {
    Vec3 half_extent;
    double density;
};

// Macroscopic-density form: Gaussian kernel integrated against the profile
// by tensor Gauss-Legendre quadrature.
double csl_F_macroscopic(const Vec3& Q_minus_x, const SlabProfile& profile, double alpha);

// delta_i = sqrt(alpha/pi) D0^2 S_i
double delta_i(const CslParams& csl);
// Gamma = zeta D0 n_out
double macro_frequency(const CslParams& csl, double n_out);
// lambda_CM = n * lambda
double lambda_cm(double n, double lambda_micro);

struct Spreading {
    double Q2;
    double P2;
};

// Per-component spreading on top of the Schrodinger values:
// <Q_i^2> += zeta delta_i hbar^2 t^3 / (6 M^2), <P_i^2> += zeta delta_i hbar^2 t / 2.
Spreading csl_spreading(double t, const CslParams& csl, double M, const Spreading& schrodinger);

// CM energy increase per unit time and unit cross-section:
// zeta sqrt(alpha/pi) D0^2 hbar^2 / M  (multiply by S_i for the full rate).
double csl_energy_rate(const CslParams& csl, double M);

}  // namespace cbr
