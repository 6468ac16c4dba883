#pragma once

#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "cbrlab/errors.hpp"
#include "cbrlab/units.hpp"

namespace cbr {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Collective-mode operators on a truncated Fock basis. b is the annihilation
// operator of the center-of-mass mode (mass M = N*m, frequency omega);
// X = sqrt(N) b, and Q, P are the CM coordinate and total momentum with
// [Q, P] = i*hbar and [X, Xdag] = N on the interior block.
struct CmOperators {
    Matrix b;
    Matrix Q;
    Matrix P;
    Matrix X;
};

Matrix annihilation_matrix(Eigen::Index d);

CmOperators cm_operators(const ModelParams& params, Eigen::Index d);

// Free CM Hamiltonian P^2 / (2M).
Matrix free_cm_hamiltonian(const ModelParams& params, Eigen::Index d);

// Fock truncation holding |alpha|^2 + 4|alpha| + 6 basis states is adequate
// for a coherent amplitude alpha.
bool truncation_adequate(Complex alpha, Eigen::Index d);

// Initial states. Constructors normalize on the truncated basis; when the
// adequacy bound fails they set *truncation_warning instead of failing.
Vector coherent_state(Complex alpha, Eigen::Index d, bool* truncation_warning = nullptr);
Matrix thermal_state(double nbar, Eigen::Index d, bool* truncation_warning = nullptr);

// Balanced two-lobe superposition |alpha + delta> + |alpha - delta| with the
// real offset delta chosen so the lobes sit `separation` apart in units of
// the mode length sqrt(hbar/(M omega)).
Vector superposition_state(Complex alpha, double separation, Eigen::Index d,
                           bool* truncation_warning = nullptr);

// State / operator checks and observables.
double hermiticity_defect(const Matrix& A);                 // max |A - Adag|
bool is_hermitian(const Matrix& A, double tol = 1e-12);
void validate_density(const Matrix& rho, double trace_tol = 1e-8,
                      double herm_tol = 1e-10, double eig_floor = -1e-8);
void validate_state(const Vector& psi, double norm_tol = 1e-10);

Complex expectation(const Matrix& rho, const Matrix& A);    // tr(rho A)
double real_expectation(const Matrix& rho, const Matrix& A);
double purity(const Matrix& rho);                           // tr(rho^2)
double trace_distance(const Matrix& rho, const Matrix& sigma);
Matrix projector(const Vector& psi);                        // |psi><psi|

}  // namespace cbr
