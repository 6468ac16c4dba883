#include "cbrlab/grid.hpp"

#include <cmath>

#include "cbrlab/fock.hpp"
#include "cbrlab/oracles.hpp"

namespace cbr {

double GridDensity::discrete_trace() const {
    return values.diagonal().real().sum() * spec.dQ();
}

void GridDensity::validate(double trace_tol, double herm_tol) const {
    spec.validate();
    if (values.rows() != spec.n || values.cols() != spec.n)
        throw ValidationError("GridDensity: shape inconsistent with spec");
    if (!values.allFinite()) throw ValidationError("GridDensity: non-finite entries");
    const double scale = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
    if ((values - values.adjoint()).cwiseAbs().maxCoeff() > herm_tol * std::max(scale, 1.0))
        throw ValidationError("GridDensity: Hermiticity violated");
    if (std::abs(discrete_trace() - 1.0) > trace_tol)
        throw ValidationError("GridDensity: discrete trace deviates from 1");
}

namespace {

Eigen::VectorXcd cat_wavefunction(const GridSpec& spec, double separation, double sigma) {
    spec.validate();
    if (!(sigma > 0.0)) throw ValidationError("gaussian packet: sigma must be positive");
    if (sigma / spec.dQ() < 8.0)
        throw ValidationError("grid resolution too coarse: need >= 8 points per Gaussian width");
    Eigen::VectorXcd psi(spec.n);
    for (Eigen::Index j = 0; j < spec.n; ++j) {
        const double q = spec.q(j);
        const double a = q - 0.5 * separation;
        const double b = q + 0.5 * separation;
        psi(j) = std::exp(-a * a / (4.0 * sigma * sigma)) +
                 std::exp(-b * b / (4.0 * sigma * sigma));
    }
    psi /= std::sqrt(psi.squaredNorm() * spec.dQ());
    return psi;
}

}  // namespace

GridDensity gaussian_cat_density(const GridSpec& spec, double separation, double sigma) {
    if (!(separation > 0.0)) throw ValidationError("gaussian_cat_density: separation must be positive");
    const Eigen::VectorXcd psi = cat_wavefunction(spec, separation, sigma);
    return GridDensity{psi * psi.adjoint(), spec};
}

GridDensity gaussian_packet_density(const GridSpec& spec, double sigma) {
    const Eigen::VectorXcd psi = cat_wavefunction(spec, 0.0, sigma);
    return GridDensity{psi * psi.adjoint(), spec};
}

GridOperator::GridOperator(const ModelParams& params, const GridSpec& spec) : spec_(spec) {
    params.validate();
    spec.validate();
    const double hbar = params.hbar();
    c_kin_ = hbar / (2.0 * params.M);
    D_ = diffusion_constant(params);
    const double l = hbar / (params.M * params.omega);
    c_mom_ = D_ * l * l;
    half_NL_ = 0.5 * params.N * params.Lambda;
    q_.resize(spec.n);
    for (Eigen::Index j = 0; j < spec.n; ++j) q_(j) = spec.q(j);
}

Eigen::MatrixXcd GridOperator::apply(const Eigen::MatrixXcd& rho) const {
    const Eigen::Index n = spec_.n;
    const double idq = 1.0 / spec_.dQ();
    const double idq2 = idq * idq;
    Eigen::MatrixXcd out(n, n);
    auto at = [&](Eigen::Index j, Eigen::Index k) -> Complex {
        if (j < 0 || j >= n || k < 0 || k >= n) return Complex(0.0, 0.0);
        return rho(j, k);
    };
    const Complex ikin(0.0, c_kin_);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const Complex c = rho(j, k);
            const Complex up = at(j + 1, k), dn = at(j - 1, k);
            const Complex rt = at(j, k + 1), lt = at(j, k - 1);
            const Complex d2Q = (up + dn - 2.0 * c) * idq2;
            const Complex d2Qp = (rt + lt - 2.0 * c) * idq2;
            const Complex dQ = (up - dn) * (0.5 * idq);
            const Complex dQp = (rt - lt) * (0.5 * idq);
            const Complex cross = (at(j + 1, k + 1) - at(j + 1, k - 1) - at(j - 1, k + 1) +
                                   at(j - 1, k - 1)) *
                                  (0.25 * idq2);
            const double dq = q_(j) - q_(k);
            Complex v = ikin * (d2Q - d2Qp);
            v -= D_ * dq * dq * c;
            v += c_mom_ * (d2Q + 2.0 * cross + d2Qp);
            v += half_NL_ * (q_(j) * dQp + q_(k) * dQ + c);
            out(j, k) = v;
        }
    }
    return out;
}

GridOperator build_rhs(const ModelParams& params, const GridSpec& spec) {
    return GridOperator(params, spec);
}

std::vector<GridDensity> evolve_grid(const GridDensity& rho0, const ModelParams& params,
                                     const std::vector<double>& t_grid, double dt) {
    rho0.validate();
    if (t_grid.empty()) throw ValidationError("evolve_grid: t_grid must not be empty");
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i] < t_grid[i + 1]))
            throw ValidationError("evolve_grid: t_grid must be strictly increasing");
    const GridOperator op(params, rho0.spec);
    const double dq = rho0.spec.dQ();
    const double cfl = 0.2 * dq * dq * params.M / params.hbar();
    if (!(dt > 0.0) || dt > cfl * (1.0 + 1e-12))
        throw ValidationError("evolve_grid: dt violates the CFL-style bound 0.2 dQ^2 M / hbar");

    const Eigen::Index n = rho0.spec.n;
    auto check = [&](const Eigen::MatrixXcd& r) {
        // boundary mass: diagonal probability sitting in the edge cells
        const double dq = rho0.spec.dQ();
        double edge = (std::abs(r(0, 0).real()) + std::abs(r(n - 1, n - 1).real())) * dq;
        if (edge > 1e-6)
            throw NumericalError("evolve_grid: boundary mass breach, domain too small",
                                 edge, 0.0);
        // mass concentration monitor: diagonal weight beyond L/2
        double outer = 0.0, total = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double w = std::abs(r(j, j).real());
            total += w;
            if (std::abs(rho0.spec.q(j)) > 0.5 * rho0.spec.L) outer += w;
        }
        if (outer > 0.01 * total)
            throw NumericalError("evolve_grid: state mass drifted beyond L/2", outer / total, 0.0);
    };

    std::vector<GridDensity> out;
    out.reserve(t_grid.size());
    Eigen::MatrixXcd rho = rho0.values;
    double t = 0.0;
    for (double target : t_grid) {
        const double span = target - t;
        if (span > 0.0) {
            const auto n_steps = static_cast<long>(std::ceil(span / dt - 1e-12));
            const double h = span / static_cast<double>(n_steps);
            for (long s = 0; s < n_steps; ++s) {
                const Eigen::MatrixXcd k1 = op.apply(rho);
                const Eigen::MatrixXcd k2 = op.apply(rho + (0.5 * h) * k1);
                const Eigen::MatrixXcd k3 = op.apply(rho + (0.5 * h) * k2);
                const Eigen::MatrixXcd k4 = op.apply(rho + h * k3);
                rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            t = target;
        }
        check(rho);
        GridDensity g{rho, rho0.spec};
        g.validate();
        out.push_back(std::move(g));
    }
    return out;
}

DecayFit fit_offdiag_decay(const std::vector<GridDensity>& series,
                           const std::vector<double>& times, double Qa, double Qb) {
    if (series.size() != times.size() || series.size() < 3)
        throw ValidationError("fit_offdiag_decay: need >= 3 aligned samples");
    const GridSpec& spec = series.front().spec;
    const double dq = spec.dQ();
    const auto ja = static_cast<Eigen::Index>(std::lround((Qa + spec.L) / dq));
    const auto jb = static_cast<Eigen::Index>(std::lround((Qb + spec.L) / dq));
    if (ja < 0 || ja >= spec.n || jb < 0 || jb >= spec.n)
        throw ValidationError("fit_offdiag_decay: (Qa, Qb) outside the grid");
    if (std::abs(series.front().values(ja, jb)) < 1e-8)
        throw ValidationError("fit_offdiag_decay: initial off-diagonal below noise floor");

    const std::size_t m = series.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        ys[i] = std::log(std::abs(series[i].values(ja, jb)));
        sx += times[i];
        sy += ys[i];
        sxx += times[i] * times[i];
        sxy += times[i] * ys[i];
    }
    const double nn = static_cast<double>(m);
    const double denom = nn * sxx - sx * sx;
    const double slope = (nn * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / nn;
    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / nn;
    for (std::size_t i = 0; i < m; ++i) {
        const double fit = intercept + slope * times[i];
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
    }
    DecayFit f;
    f.zeta = -slope;
    f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    f.rms_residual = std::sqrt(ss_res / nn);
    // A measurably decaying signal must fit well; for a flat (diagonal)
    // signal there is no slope to resolve and R^2 is meaningless.
    const double total_decay = std::abs(slope) * (times.back() - times.front());
    if (total_decay > 0.01 && f.r_squared < 0.99)
        throw NumericalError("fit_offdiag_decay: poor fit (R^2 < 0.99), window too long",
                             f.zeta, f.rms_residual);
    return f;
}

double grid_moment(const GridDensity& rho, int power) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < rho.spec.n; ++j)
        s += std::pow(rho.spec.q(j), power) * rho.values(j, j).real();
    return s * rho.spec.dQ();
}

double grid_purity(const GridDensity& rho) {
    const double dq = rho.spec.dQ();
    return rho.values.cwiseAbs2().sum() * dq * dq;
}

}  // namespace cbr
