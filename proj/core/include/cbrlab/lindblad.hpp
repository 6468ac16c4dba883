#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cbrlab/fock.hpp"
#include "cbrlab/units.hpp"

namespace cbr {

struct JumpOperator {
    Matrix op;
    double rate;  // 1/time
};

// rho' = -(i/hbar)[H, rho] + sum_k rate_k (c rho c^+ - 1/2 {c^+ c, rho})
class LindbladGenerator {
public:
    LindbladGenerator(Matrix H, std::vector<JumpOperator> jumps, double hbar,
                      double fastest_rate);

    Matrix apply(const Matrix& rho) const;

    const Matrix& hamiltonian() const { return H_; }
    const std::vector<JumpOperator>& jump_ops() const { return jumps_; }
    double hbar() const { return hbar_; }
    // Fastest dynamical rate, for step-size checks.
    double fastest_rate() const { return fastest_rate_; }
    Eigen::Index dim() const { return H_.rows(); }

private:
    Matrix H_;
    std::vector<JumpOperator> jumps_;
    std::vector<Matrix> cdag_c_;  // cached c^+ c per jump
    double hbar_;
    double fastest_rate_;
};

struct EvolutionRecord {
    std::vector<double> times;
    std::vector<Matrix> states;
    std::map<std::string, std::vector<double>> observables;
    // worst invariant drifts seen at output times
    double max_trace_defect = 0.0;
    double max_hermiticity_defect = 0.0;
    double min_eigenvalue = 0.0;
};

using NamedOps = std::vector<std::pair<std::string, Matrix>>;

// Q, P, Q2, QP (= {Q,P}), P2 and K = P^2/2M for the CM mode.
NamedOps standard_observables(const ModelParams& params, Eigen::Index d);

// Thermal damped-mode generator: c1 = sqrt(Lambda N <n>) b^+,
// c2 = sqrt(Lambda N (1+<n>)) b, H = P^2/(2M). At T = 0 only the decay
// channel survives.
LindbladGenerator build_generator(const ModelParams& params, Eigen::Index d);

// Joint CM+reservoir-mode generator with the single Hermitian coupling
// L = X^+ A + X A^+ at rate Lambda (resonant mode, frequency omega):
// rho' = -(i/hbar)[H, rho] - (Lambda/2)[L, [L, rho]].
LindbladGenerator build_joint_generator(const ModelParams& params, Eigen::Index d_cm,
                                        Eigen::Index d_cbr);

enum class Keep { cm, cbr };
Matrix partial_trace(const Matrix& rho_joint, Eigen::Index d_cm, Eigen::Index d_cbr, Keep keep);

// Fixed-step RK4 integration of the master equation. rho0 is the state at
// t = 0; outputs at the strictly increasing t_grid. dt must resolve the
// fastest scale: dt <= 0.01 / fastest_rate. Positivity and trace are
// monitored at outputs, never enforced; drift beyond 10x the gate tolerances
// (|tr-1| <= 1e-7, min eig >= -1e-7) raises NumericalError advising a
// smaller dt.
EvolutionRecord evolve_master(const LindbladGenerator& gen, const Matrix& rho0,
                              const std::vector<double>& t_grid, double dt,
                              const NamedOps& observables = {});

// d<V>/dt = tr(V L rho).
double ehrenfest_rate(const LindbladGenerator& gen, const Matrix& rho, const Matrix& V);

double linear_entropy(const Matrix& rho);        // tr(rho - rho^2)
double von_neumann_entropy(const Matrix& rho);   // -tr(rho ln rho)

}  // namespace cbr
