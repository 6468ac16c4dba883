#include "cbrlab/fock.hpp"

#include <cmath>

namespace cbr {

Matrix annihilation_matrix(Eigen::Index d) {
    if (d < 2) throw ValidationError("annihilation_matrix: d must be >= 2");
    Matrix b = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i + 1 < d; ++i)
        b(i, i + 1) = std::sqrt(static_cast<double>(i + 1));
    return b;
}

CmOperators cm_operators(const ModelParams& params, Eigen::Index d) {
    params.validate();
    if (d < 4) throw ValidationError("cm_operators: d must be >= 4");
    const double hbar = params.hbar();
    const double sqrtN = std::sqrt(params.N);
    CmOperators ops;
    ops.b = annihilation_matrix(d);
    const Matrix bdag = ops.b.adjoint();
    ops.X = sqrtN * ops.b;
    ops.Q = std::sqrt(hbar / (2.0 * params.m * params.omega)) / sqrtN * (ops.b + bdag);
    ops.P = Complex(0.0, -1.0) * std::sqrt(hbar * params.m * params.omega / 2.0) * sqrtN *
            (ops.b - bdag);
    return ops;
}

Matrix free_cm_hamiltonian(const ModelParams& params, Eigen::Index d) {
    const CmOperators ops = cm_operators(params, d);
    Matrix H = ops.P * ops.P / (2.0 * params.M);
    // symmetrize away roundoff
    H = 0.5 * (H + H.adjoint()).eval();
    return H;
}

bool truncation_adequate(Complex alpha, Eigen::Index d) {
    const double a = std::abs(alpha);
    return a * a + 4.0 * a + 6.0 <= static_cast<double>(d);
}

namespace {

void warn(bool* flag) {
    if (flag) *flag = true;
}

}  // namespace

Vector coherent_state(Complex alpha, Eigen::Index d, bool* truncation_warning) {
    if (d < 2) throw ValidationError("coherent_state: d must be >= 2");
    if (!truncation_adequate(alpha, d)) warn(truncation_warning);
    Vector psi(d);
    // amplitudes alpha^n / sqrt(n!), built recursively, then normalized on
    // the truncated basis
    psi(0) = 1.0;
    for (Eigen::Index n = 1; n < d; ++n)
        psi(n) = psi(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    psi.normalize();
    return psi;
}

Matrix thermal_state(double nbar, Eigen::Index d, bool* truncation_warning) {
    if (d < 2) throw ValidationError("thermal_state: d must be >= 2");
    if (nbar < 0.0) throw ValidationError("thermal_state: nbar must be non-negative");
    Matrix rho = Matrix::Zero(d, d);
    if (nbar == 0.0) {
        rho(0, 0) = 1.0;
        return rho;
    }
    if (nbar + 5.0 * std::sqrt(nbar * (nbar + 1.0)) > static_cast<double>(d))
        warn(truncation_warning);
    const double q = nbar / (1.0 + nbar);
    double w = 1.0, sum = 0.0;
    for (Eigen::Index n = 0; n < d; ++n) {
        rho(n, n) = w;
        sum += w;
        w *= q;
    }
    rho /= sum;
    return rho;
}

Vector superposition_state(Complex alpha, double separation, Eigen::Index d,
                           bool* truncation_warning) {
    if (!(separation > 0.0)) throw ValidationError("superposition_state: separation must be positive");
    // <Q> of |beta> is sqrt(2) Re(beta) mode lengths; lobes at +-separation/2.
    const double delta = separation / (2.0 * std::sqrt(2.0));
    if (!truncation_adequate(std::abs(alpha) + delta, d)) warn(truncation_warning);
    Vector psi = coherent_state(alpha + delta, d) + coherent_state(alpha - delta, d);
    psi.normalize();
    return psi;
}

double hermiticity_defect(const Matrix& A) {
    return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& A, double tol) {
    const double scale = std::max(A.cwiseAbs().maxCoeff(), 1.0);
    return hermiticity_defect(A) <= tol * scale;
}

void validate_density(const Matrix& rho, double trace_tol, double herm_tol, double eig_floor) {
    if (rho.rows() != rho.cols()) throw ValidationError("density matrix must be square");
    if (!rho.allFinite()) throw ValidationError("density matrix has non-finite entries");
    if (!is_hermitian(rho, herm_tol))
        throw ValidationError("density matrix is not Hermitian within tolerance");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > trace_tol)
        throw ValidationError("density matrix trace deviates from 1 beyond tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < eig_floor)
        throw ValidationError("density matrix has a negative eigenvalue beyond tolerance");
}

void validate_state(const Vector& psi, double norm_tol) {
    if (!psi.allFinite()) throw ValidationError("state vector has non-finite entries");
    if (std::abs(psi.norm() - 1.0) > norm_tol)
        throw ValidationError("state vector norm deviates from 1 beyond tolerance");
}

Complex expectation(const Matrix& rho, const Matrix& A) {
    return (rho * A).trace();
}

double real_expectation(const Matrix& rho, const Matrix& A) {
    return expectation(rho, A).real();
}

double purity(const Matrix& rho) {
    return (rho * rho).trace().real();
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
    Matrix diff = rho - sigma;
    diff = 0.5 * (diff + diff.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Matrix projector(const Vector& psi) {
    return psi * psi.adjoint();
}

}  // namespace cbr
