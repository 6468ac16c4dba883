#include "cbrlab/lindblad.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "cbrlab/spectrum.hpp"

namespace cbr {

LindbladGenerator::LindbladGenerator(Matrix H, std::vector<JumpOperator> jumps, double hbar,
                                     double fastest_rate)
    : H_(std::move(H)), jumps_(std::move(jumps)), hbar_(hbar), fastest_rate_(fastest_rate) {
    if (H_.rows() != H_.cols()) throw ValidationError("LindbladGenerator: H must be square");
    if (!(hbar_ > 0.0)) throw ValidationError("LindbladGenerator: hbar must be positive");
    cdag_c_.reserve(jumps_.size());
    for (const auto& j : jumps_) {
        if (j.rate < 0.0) throw ValidationError("LindbladGenerator: jump rates must be >= 0");
        if (j.op.rows() != H_.rows() || j.op.cols() != H_.cols())
            throw ValidationError("LindbladGenerator: jump operator shape mismatch");
        cdag_c_.push_back(j.op.adjoint() * j.op);
    }
}

Matrix LindbladGenerator::apply(const Matrix& rho) const {
    const Complex mi_over_hbar(0.0, -1.0 / hbar_);
    Matrix out = mi_over_hbar * (H_ * rho - rho * H_);
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        const double r = jumps_[k].rate;
        if (r == 0.0) continue;
        const Matrix& c = jumps_[k].op;
        const Matrix& cc = cdag_c_[k];
        out.noalias() += r * (c * rho * c.adjoint());
        out.noalias() -= (0.5 * r) * (cc * rho);
        out.noalias() -= (0.5 * r) * (rho * cc);
    }
    return out;
}

NamedOps standard_observables(const ModelParams& params, Eigen::Index d) {
    const CmOperators ops = cm_operators(params, d);
    NamedOps out;
    out.emplace_back("Q", ops.Q);
    out.emplace_back("P", ops.P);
    out.emplace_back("Q2", ops.Q * ops.Q);
    out.emplace_back("QP", ops.Q * ops.P + ops.P * ops.Q);
    out.emplace_back("P2", ops.P * ops.P);
    out.emplace_back("K", ops.P * ops.P / (2.0 * params.M));
    return out;
}

LindbladGenerator build_generator(const ModelParams& params, Eigen::Index d) {
    params.validate();
    if (d < 4) throw ValidationError("build_generator: d must be >= 4");
    const CmOperators ops = cm_operators(params, d);
    const double nbar = params.occupation();
    const double NL = params.N * params.Lambda;
    std::vector<JumpOperator> jumps;
    if (NL > 0.0) {
        if (nbar > 0.0) jumps.push_back({ops.b.adjoint(), NL * nbar});
        jumps.push_back({ops.b, NL * (1.0 + nbar)});
    }
    const double fastest = std::max(params.omega, NL * (1.0 + 2.0 * nbar));
    return LindbladGenerator(free_cm_hamiltonian(params, d), std::move(jumps), params.hbar(),
                             fastest);
}

LindbladGenerator build_joint_generator(const ModelParams& params, Eigen::Index d_cm,
                                        Eigen::Index d_cbr) {
    params.validate();
    if (d_cm < 4 || d_cbr < 2)
        throw ValidationError("build_joint_generator: need d_cm >= 4, d_cbr >= 2");
    if (d_cm * d_cbr > 4096)
        throw ValidationError("build_joint_generator: d_cm*d_cbr exceeds the 4096 budget");
    const double hbar = params.hbar();
    const CmOperators ops = cm_operators(params, d_cm);
    const Matrix A = annihilation_matrix(d_cbr);
    const Matrix I_cm = Matrix::Identity(d_cm, d_cm);
    const Matrix I_cbr = Matrix::Identity(d_cbr, d_cbr);

    Matrix H = Eigen::kroneckerProduct(free_cm_hamiltonian(params, d_cm), I_cbr).eval();
    H += Eigen::kroneckerProduct(I_cm, (hbar * params.omega) * (A.adjoint() * A).eval()).eval();

    Matrix L = Eigen::kroneckerProduct(ops.X.adjoint(), A).eval();
    L += Eigen::kroneckerProduct(ops.X, A.adjoint()).eval();

    std::vector<JumpOperator> jumps;
    if (params.Lambda > 0.0) jumps.push_back({std::move(L), params.Lambda});
    // L ~ sqrt(N) b x A, so the dissipative scale is Lambda * N * (occupied modes)
    const double fastest =
        std::max(params.omega, params.Lambda * params.N * static_cast<double>(d_cbr));
    return LindbladGenerator(std::move(H), std::move(jumps), hbar, fastest);
}

Matrix partial_trace(const Matrix& rho_joint, Eigen::Index d_cm, Eigen::Index d_cbr, Keep keep) {
    if (rho_joint.rows() != d_cm * d_cbr || rho_joint.cols() != d_cm * d_cbr)
        throw ValidationError("partial_trace: dimensions inconsistent with the joint state");
    if (keep == Keep::cm) {
        Matrix out = Matrix::Zero(d_cm, d_cm);
        for (Eigen::Index i = 0; i < d_cm; ++i)
            for (Eigen::Index j = 0; j < d_cm; ++j)
                for (Eigen::Index k = 0; k < d_cbr; ++k)
                    out(i, j) += rho_joint(i * d_cbr + k, j * d_cbr + k);
        return out;
    }
    Matrix out = Matrix::Zero(d_cbr, d_cbr);
    for (Eigen::Index i = 0; i < d_cbr; ++i)
        for (Eigen::Index j = 0; j < d_cbr; ++j)
            for (Eigen::Index k = 0; k < d_cm; ++k)
                out(i, j) += rho_joint(k * d_cbr + i, k * d_cbr + j);
    return out;
}

namespace {

struct InvariantCheck {
    double trace_defect;
    double herm_defect;
    double min_eig;
};

InvariantCheck check_invariants(const Matrix& rho) {
    InvariantCheck c;
    c.trace_defect = std::abs(rho.trace().real() - 1.0);
    c.herm_defect = hermiticity_defect(rho);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
    c.min_eig = es.eigenvalues().minCoeff();
    return c;
}

}  // namespace

EvolutionRecord evolve_master(const LindbladGenerator& gen, const Matrix& rho0,
                              const std::vector<double>& t_grid, double dt,
                              const NamedOps& observables) {
    if (t_grid.empty()) throw ValidationError("evolve_master: t_grid must not be empty");
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i] < t_grid[i + 1]))
            throw ValidationError("evolve_master: t_grid must be strictly increasing");
    if (!(t_grid.front() >= 0.0)) throw ValidationError("evolve_master: t_grid must start at >= 0");
    if (!(dt > 0.0)) throw ValidationError("evolve_master: dt must be positive");
    if (dt > 0.01 / gen.fastest_rate() * (1.0 + 1e-12))
        throw ValidationError("evolve_master: dt does not resolve the fastest scale (need dt <= 0.01/max rate)");
    validate_density(rho0);

    EvolutionRecord rec;
    rec.min_eigenvalue = 1.0;
    Matrix rho = rho0;
    double t = 0.0;

    auto record_point = [&](double time) {
        const InvariantCheck c = check_invariants(rho);
        rec.max_trace_defect = std::max(rec.max_trace_defect, c.trace_defect);
        rec.max_hermiticity_defect = std::max(rec.max_hermiticity_defect, c.herm_defect);
        rec.min_eigenvalue = std::min(rec.min_eigenvalue, c.min_eig);
        if (c.trace_defect > 1e-6 || c.min_eig < -1e-6)
            throw NumericalError(
                "evolve_master: invariant drift beyond 10x tolerance; use a smaller dt",
                c.trace_defect, c.min_eig);
        rec.times.push_back(time);
        rec.states.push_back(rho);
        for (const auto& [name, op] : observables)
            rec.observables[name].push_back(real_expectation(rho, op));
        rec.observables["purity"].push_back(purity(rho));
        rec.observables["S_l"].push_back(linear_entropy(rho));
        rec.observables["S_s"].push_back(von_neumann_entropy(rho));
    };

    for (double target : t_grid) {
        const double span = target - t;
        if (span > 0.0) {
            const auto n_steps = static_cast<long>(std::ceil(span / dt - 1e-12));
            const double h = span / static_cast<double>(n_steps);
            for (long s = 0; s < n_steps; ++s) {
                const Matrix k1 = gen.apply(rho);
                const Matrix k2 = gen.apply(rho + (0.5 * h) * k1);
                const Matrix k3 = gen.apply(rho + (0.5 * h) * k2);
                const Matrix k4 = gen.apply(rho + h * k3);
                rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            t = target;
        }
        record_point(target);
    }
    return rec;
}

double ehrenfest_rate(const LindbladGenerator& gen, const Matrix& rho, const Matrix& V) {
    if (V.rows() != gen.dim() || V.cols() != gen.dim())
        throw ValidationError("ehrenfest_rate: operator shape mismatch");
    if (rho.rows() != gen.dim() || rho.cols() != gen.dim())
        throw ValidationError("ehrenfest_rate: state shape mismatch");
    return (V * gen.apply(rho)).trace().real();
}

double linear_entropy(const Matrix& rho) {
    return (rho.trace() - (rho * rho).trace()).real();
}

double von_neumann_entropy(const Matrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam < -1e-8)
            throw ValidationError("von_neumann_entropy: eigenvalue below -1e-8, invalid state");
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return s;
}

}  // namespace cbr
