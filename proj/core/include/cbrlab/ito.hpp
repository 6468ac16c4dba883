#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cbrlab/fock.hpp"
#include "cbrlab/lindblad.hpp"
#include "cbrlab/units.hpp"

namespace cbr {

// Trajectory seeds derive from the master seed by a stated 64-bit mixing
// permutation (splitmix64 finalizer over master + (index+1)*golden-gamma),
// so ensembles are reproducible and schedule-independent.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

// Deterministic Gaussian stream: mt19937_64 + Box-Muller on 53-bit uniforms.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : gen_(seed) {}
    double gaussian();          // N(0, 1)
    double uniform();           // (0, 1]
private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct WienerConfig {
    double Lambda = 0.0;             // variance scale: dW ~ N(0, Lambda dt)
    double dt = 1e-3;
    std::uint64_t master_seed = 0;
    int n_channels = 1;              // real channels per spatial dimension

    void validate() const {
        if (!(dt > 0.0)) throw ValidationError("WienerConfig.dt: must be positive");
        if (Lambda < 0.0) throw ValidationError("WienerConfig.Lambda: must be >= 0");
        if (n_channels < 1) throw ValidationError("WienerConfig.n_channels: must be >= 1");
    }
};

struct Trajectory {
    std::uint64_t seed = 0;
    std::vector<double> times;
    std::vector<Vector> states;   // raw (unnormalized) vectors
    std::vector<double> norm2;    // squared norms
};

struct TrajectoryEnsemble {
    std::size_t n_traj = 0;
    std::vector<Trajectory> trajectories;        // empty unless kept
    std::vector<double> times;
    std::vector<Matrix> reconstruction;          // trace-normalized mean outer product
    std::vector<Eigen::MatrixXd> stderr_entries; // per-entry statistical error
    std::vector<double> mean_norm2;              // raw-ensemble trace (martingale diagnostic)
    std::vector<double> mean_norm2_stderr;
    std::size_t resampled = 0;
};

// One raw Euler-Maruyama step of the linear unraveling with Z = X:
// psi' = psi + [-(i/hbar) H dt + X dW - (Lambda/2) X^+X dt] psi,
// dW ~ N(0, Lambda dt). The norm is not renormalized.
Vector step_raw(const Vector& psi, const Matrix& X, const Matrix& H, const WienerConfig& cfg,
                GaussianRng& rng, double hbar = 1.0);

struct EnsembleOptions {
    bool keep_trajectories = true;
    int threads = 0;  // 0 = hardware concurrency
};

// Raw-ensemble integration with one real Wiener channel per jump operator of
// build_generator(params, d): mean of |psi><psi| over raw states reconstructs
// the master-equation state. Trajectories whose norm^2 leaves [1e-6, 1e6] are
// resampled with a derived seed and counted; more than 1% resampled is a
// quality error.
TrajectoryEnsemble run_ensemble(const ModelParams& params, const Vector& psi0,
                                std::size_t n_traj, const std::vector<double>& t_grid,
                                const WienerConfig& cfg, const EnsembleOptions& opts = {});

struct WeightingReport {
    double max_entry_diff = 0.0;    // raw mean vs weight-resummed mean
    double max_weight_dev = 0.0;    // max |w - 1| (unit under unitary evolution)
    bool identity_holds = false;    // max_entry_diff <= 1e-12 * scale
};

// Verifies the raw/physical precept: mean(|psi><psi|) over raw states equals
// the norm^2-weighted mean of normalized projectors, entrywise to roundoff.
// Requires kept trajectories.
WeightingReport physical_weighting_check(const TrajectoryEnsemble& ensemble);

}  // namespace cbr
