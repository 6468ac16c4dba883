#include <doctest.h>

#include <cmath>

#include "cbrlab/ito.hpp"
#include "cbrlab/lindblad.hpp"

using namespace cbr;

namespace {

std::vector<double> grid(double t_max, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = t_max * (i + 1) / n;
    return t;
}

}  // namespace

TEST_CASE("seed mixing is deterministic and spreads") {
    CHECK(mix_seed(42, 0) == mix_seed(42, 0));
    CHECK(mix_seed(42, 0) != mix_seed(42, 1));
    CHECK(mix_seed(42, 0) != mix_seed(43, 0));
    // low bits should not be degenerate across consecutive indices
    int distinct = 0;
    for (std::uint64_t i = 0; i < 64; ++i)
        distinct += static_cast<int>(mix_seed(7, i) & 1ull);
    CHECK(distinct > 16);
    CHECK(distinct < 48);
}

TEST_CASE("Wiener increment moments over one million draws") {
    const double Lambda = 0.04, dt = 1e-3;
    const std::size_t n = 1000000;
    GaussianRng rng(987654321);
    double sum = 0.0, sum2 = 0.0;
    const double scale = std::sqrt(Lambda * dt);
    for (std::size_t i = 0; i < n; ++i) {
        const double dW = scale * rng.gaussian();
        sum += dW;
        sum2 += dW * dW;
    }
    const double mean = sum / n;
    const double mean2 = sum2 / n;
    // 3 sigma bands for the first two moments of N(0, Lambda dt)
    CHECK(std::abs(mean) < 3.0 * std::sqrt(Lambda * dt / n));
    CHECK(std::abs(mean2 - Lambda * dt) < 3.0 * std::sqrt(2.0 / n) * Lambda * dt);
}

TEST_CASE("deterministic Schrodinger step at Lambda = 0") {
    const ModelParams p = ModelParams::engine(4.0, 0.0, 0.0);
    const Eigen::Index d = 16;
    const CmOperators ops = cm_operators(p, d);
    const Matrix H = free_cm_hamiltonian(p, d);
    const Vector psi = coherent_state({0.5, 0.5}, d);
    WienerConfig cfg;
    cfg.Lambda = 0.0;
    cfg.dt = 1e-3;
    GaussianRng rng(1);
    const Vector stepped = step_raw(psi, ops.X, H, cfg, rng);
    const Vector euler = psi + Complex(0.0, -cfg.dt) * (H * psi);
    CHECK((stepped - euler).norm() < 1e-15);
}

TEST_CASE("raw step drift matches the generator dissipator on average") {
    // E[dpsi] = [-iH - (Lambda/2) X^+X] psi dt: average many steps
    const ModelParams p = ModelParams::engine(4.0, 0.25, 0.0);
    const Eigen::Index d = 12;
    const CmOperators ops = cm_operators(p, d);
    const Matrix H = free_cm_hamiltonian(p, d);
    const Vector psi = coherent_state(0.8, d);
    WienerConfig cfg;
    cfg.Lambda = p.Lambda;
    cfg.dt = 1e-3;
    GaussianRng rng(5);
    Vector acc = Vector::Zero(d);
    const int n = 200000;
    for (int i = 0; i < n; ++i) acc += step_raw(psi, ops.X, H, cfg, rng) - psi;
    acc /= static_cast<double>(n);
    const Vector want =
        cfg.dt * ((Complex(0.0, -1.0) * (H * psi)) -
                  (0.5 * cfg.Lambda) * (ops.X.adjoint() * (ops.X * psi)));
    // the residual is the sample mean of X psi dW: bound it at 4 sigma
    const double sigma = (ops.X * psi).norm() * std::sqrt(cfg.Lambda * cfg.dt / n);
    CHECK((acc - want).norm() < 4.0 * sigma);
}

TEST_CASE("ensemble reconstruction approaches the master solution") {
    const ModelParams p = ModelParams::engine(4.0, 0.25, 0.0);
    const Eigen::Index d = 16;
    const Vector psi0 = coherent_state(1.0, d);
    const auto t_grid = grid(1.0, 4);
    WienerConfig cfg;
    cfg.Lambda = p.Lambda;
    cfg.dt = 0.005;
    cfg.master_seed = 11;
    EnsembleOptions opts;
    opts.keep_trajectories = false;
    const auto ens = run_ensemble(p, psi0, 800, t_grid, cfg, opts);
    const auto rec = evolve_master(build_generator(p, d), projector(psi0), t_grid, 0.005);
    CHECK(trace_distance(ens.reconstruction.back(), rec.states.back()) < 0.1);
}

TEST_CASE("martingale: mean raw norm squared stays at one within three sigma") {
    const ModelParams p = ModelParams::engine(4.0, 0.25, 0.5);
    const Eigen::Index d = 20;
    const Vector psi0 = coherent_state(0.8, d);
    const auto t_grid = grid(1.0, 5);
    WienerConfig cfg;
    cfg.Lambda = p.Lambda;
    cfg.dt = 0.004;
    cfg.master_seed = 3;
    cfg.n_channels = 2;
    EnsembleOptions opts;
    opts.keep_trajectories = false;
    const auto ens = run_ensemble(p, psi0, 600, t_grid, cfg, opts);
    for (std::size_t i = 0; i < ens.times.size(); ++i) {
        INFO("t=" << ens.times[i] << " mean=" << ens.mean_norm2[i]
                  << " se=" << ens.mean_norm2_stderr[i]);
        CHECK(std::abs(ens.mean_norm2[i] - 1.0) <= 3.0 * ens.mean_norm2_stderr[i] + 1e-3);
    }
}

TEST_CASE("identical master seed gives bit-identical reconstructions") {
    const ModelParams p = ModelParams::engine(2.0, 0.25, 0.0);
    const Eigen::Index d = 10;
    const Vector psi0 = coherent_state(0.7, d);
    const auto t_grid = grid(0.5, 2);
    WienerConfig cfg;
    cfg.Lambda = p.Lambda;
    cfg.dt = 0.005;
    cfg.master_seed = 77;
    EnsembleOptions a;
    a.keep_trajectories = false;
    a.threads = 1;
    EnsembleOptions b;
    b.keep_trajectories = false;
    b.threads = 4;
    const auto e1 = run_ensemble(p, psi0, 256, t_grid, cfg, a);
    const auto e2 = run_ensemble(p, psi0, 256, t_grid, cfg, b);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        CHECK((e1.reconstruction[i] - e2.reconstruction[i]).cwiseAbs().maxCoeff() == 0.0);
        CHECK(e1.mean_norm2[i] == e2.mean_norm2[i]);
    }
}

TEST_CASE("statistical error halves when the ensemble quadruples") {
    const ModelParams p = ModelParams::engine(2.0, 0.25, 0.0);
    const Eigen::Index d = 10;
    const Vector psi0 = coherent_state(0.7, d);
    const auto t_grid = grid(0.5, 2);
    WienerConfig cfg;
    cfg.Lambda = p.Lambda;
    cfg.dt = 0.005;
    cfg.master_seed = 5;
    EnsembleOptions opts;
    opts.keep_trajectories = false;
    const auto small = run_ensemble(p, psi0, 200, t_grid, cfg, opts);
    const auto large = run_ensemble(p, psi0, 800, t_grid, cfg, opts);
    const double r = small.stderr_entries.back().sum() / large.stderr_entries.back().sum();
    CHECK(r > 1.6);
    CHECK(r < 2.5);
}

TEST_CASE("raw/physical weighting identity holds to roundoff") {
    const ModelParams p = ModelParams::engine(4.0, 0.25, 0.5);
    const Eigen::Index d = 14;
    const Vector psi0 = coherent_state(0.6, d);
    const auto t_grid = grid(0.6, 3);
    WienerConfig cfg;
    cfg.Lambda = p.Lambda;
    cfg.dt = 0.004;
    cfg.master_seed = 21;
    const auto ens = run_ensemble(p, psi0, 128, t_grid, cfg, {});
    const WeightingReport rep = physical_weighting_check(ens);
    CHECK(rep.identity_holds);
    CHECK(rep.max_entry_diff <= 1e-12);
}

TEST_CASE("unitary ensemble carries near-unit weights") {
    const ModelParams p = ModelParams::engine(4.0, 0.0, 0.0);
    const Eigen::Index d = 12;
    const Vector psi0 = coherent_state(0.5, d);
    const auto t_grid = grid(0.2, 2);
    WienerConfig cfg;
    cfg.Lambda = 0.0;
    cfg.dt = 0.002;
    cfg.master_seed = 9;
    const auto ens = run_ensemble(p, psi0, 128, t_grid, cfg, {});
    const WeightingReport rep = physical_weighting_check(ens);
    // Euler steps conserve the norm only to O(dt^2) per step
    CHECK(rep.max_weight_dev < 1e-3);
    CHECK(rep.identity_holds);
}

TEST_CASE("ensemble preconditions") {
    const ModelParams p = ModelParams::engine(4.0, 0.25, 0.0);
    const Vector psi0 = coherent_state(1.0, 16);
    WienerConfig cfg;
    cfg.Lambda = p.Lambda;
    cfg.dt = 0.005;
    CHECK_THROWS_AS(run_ensemble(p, psi0, 50, {0.1}, cfg, {}), ValidationError);
    // state with weight at the truncation edge
    Vector bad = Vector::Zero(8);
    bad(7) = 1.0;
    CHECK_THROWS_AS(run_ensemble(p, bad, 200, {0.1}, cfg, {}), ValidationError);
    // dt too coarse for the fastest rate
    WienerConfig coarse = cfg;
    coarse.dt = 0.5;
    CHECK_THROWS_AS(run_ensemble(p, psi0, 200, {1.0}, coarse, {}), ValidationError);
}
