#include "cbrlab/ito.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace cbr {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t x = master + 0x9E3779B97F4A7C15ull * (index + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double GaussianRng::uniform() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
}

double GaussianRng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
}

Vector step_raw(const Vector& psi, const Matrix& X, const Matrix& H, const WienerConfig& cfg,
                GaussianRng& rng, double hbar) {
    cfg.validate();
    if (!psi.allFinite()) throw ValidationError("step_raw: psi has non-finite entries");
    const double dW = rng.gaussian() * std::sqrt(cfg.Lambda * cfg.dt);
    Vector out = psi;
    out.noalias() += (Complex(0.0, -cfg.dt / hbar)) * (H * psi);
    if (cfg.Lambda > 0.0) {
        out.noalias() += dW * (X * psi);
        out.noalias() -= (0.5 * cfg.Lambda * cfg.dt) * (X.adjoint() * (X * psi));
    }
    return out;
}

namespace {

struct ChannelSet {
    Matrix drift;                 // -(i/hbar) H - 1/2 sum rate c^+c
    std::vector<Matrix> noise;    // sqrt(rate) * c
};

ChannelSet make_channels(const LindbladGenerator& gen) {
    ChannelSet cs;
    cs.drift = Complex(0.0, -1.0 / gen.hbar()) * gen.hamiltonian();
    for (const auto& j : gen.jump_ops()) {
        if (j.rate == 0.0) continue;
        cs.drift -= (0.5 * j.rate) * (j.op.adjoint() * j.op);
        cs.noise.push_back(std::sqrt(j.rate) * j.op);
    }
    return cs;
}

// Integrates one raw trajectory; returns false if the norm guard trips.
bool integrate_trajectory(const ChannelSet& cs, const Vector& psi0,
                          const std::vector<double>& t_grid, double dt, std::uint64_t seed,
                          std::vector<Vector>& out_states) {
    GaussianRng rng(seed);
    Vector psi = psi0;
    out_states.clear();
    out_states.reserve(t_grid.size());
    double t = 0.0;
    for (double target : t_grid) {
        const double span = target - t;
        if (span > 0.0) {
            const auto n_steps = static_cast<long>(std::ceil(span / dt - 1e-12));
            const double h = span / static_cast<double>(n_steps);
            const double sqh = std::sqrt(h);
            for (long s = 0; s < n_steps; ++s) {
                Vector dpsi = h * (cs.drift * psi);
                for (const Matrix& c : cs.noise)
                    dpsi.noalias() += (sqh * rng.gaussian()) * (c * psi);
                psi += dpsi;
                const double n2 = psi.squaredNorm();
                if (!(n2 >= 1e-6 && n2 <= 1e6)) return false;
            }
            t = target;
        }
        out_states.push_back(psi);
    }
    return true;
}

}  // namespace

TrajectoryEnsemble run_ensemble(const ModelParams& params, const Vector& psi0,
                                std::size_t n_traj, const std::vector<double>& t_grid,
                                const WienerConfig& cfg, const EnsembleOptions& opts) {
    params.validate();
    cfg.validate();
    if (n_traj < 100) throw ValidationError("run_ensemble: n_traj must be >= 100");
    if (t_grid.empty()) throw ValidationError("run_ensemble: t_grid must not be empty");
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i] < t_grid[i + 1]))
            throw ValidationError("run_ensemble: t_grid must be strictly increasing");
    const Eigen::Index d = psi0.size();
    // truncation adequacy: negligible weight in the top basis states
    const Eigen::Index guard = std::max<Eigen::Index>(1, d / 10);
    if (psi0.tail(guard).squaredNorm() > 1e-8)
        throw ValidationError("run_ensemble: psi0 carries weight near the truncation edge");
    const double nbar = params.occupation();
    const double fastest = std::max(params.omega, params.N * params.Lambda * (1.0 + 2.0 * nbar));
    if (cfg.dt > 0.01 / fastest * (1.0 + 1e-12))
        throw ValidationError("run_ensemble: dt does not resolve the fastest scale");

    const LindbladGenerator gen = build_generator(params, d);
    const ChannelSet cs = make_channels(gen);
    const std::size_t n_out = t_grid.size();

    struct BlockResult {
        std::vector<Matrix> sum_outer;                 // sum |psi><psi|
        std::vector<Eigen::MatrixXd> sum_abs2;         // sum |outer entries|^2
        std::vector<double> sum_n2, sum_n4;
        std::vector<Trajectory> kept;
        std::size_t resampled = 0;
    };

    constexpr std::size_t kBlock = 64;
    const std::size_t n_blocks = (n_traj + kBlock - 1) / kBlock;

    auto run_block = [&](std::size_t b) {
        BlockResult r;
        r.sum_outer.assign(n_out, Matrix::Zero(d, d));
        r.sum_abs2.assign(n_out, Eigen::MatrixXd::Zero(d, d));
        r.sum_n2.assign(n_out, 0.0);
        r.sum_n4.assign(n_out, 0.0);
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(n_traj, lo + kBlock);
        std::vector<Vector> states;
        for (std::size_t i = lo; i < hi; ++i) {
            std::uint64_t seed = mix_seed(cfg.master_seed, i);
            bool ok = integrate_trajectory(cs, psi0, t_grid, cfg.dt, seed, states);
            for (int attempt = 1; !ok && attempt <= 8; ++attempt) {
                ++r.resampled;
                seed = mix_seed(seed ^ 0xD1B54A32D192ED03ull, static_cast<std::uint64_t>(attempt));
                ok = integrate_trajectory(cs, psi0, t_grid, cfg.dt, seed, states);
            }
            if (!ok)
                throw NumericalError("run_ensemble: trajectory norm guard kept failing", 0.0, 0.0);
            for (std::size_t k = 0; k < n_out; ++k) {
                const Matrix outer = states[k] * states[k].adjoint();
                r.sum_outer[k] += outer;
                r.sum_abs2[k] += outer.cwiseAbs2();
                const double n2 = outer.trace().real();
                r.sum_n2[k] += n2;
                r.sum_n4[k] += n2 * n2;
            }
            if (opts.keep_trajectories) {
                Trajectory tr;
                tr.seed = seed;
                tr.times = t_grid;
                tr.states = states;
                tr.norm2.reserve(n_out);
                for (const auto& s : states) tr.norm2.push_back(s.squaredNorm());
                r.kept.push_back(std::move(tr));
            }
        }
        return r;
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_workers =
        opts.threads > 0 ? static_cast<unsigned>(opts.threads) : hw;

    std::vector<BlockResult> results(n_blocks);
    std::size_t next = 0;
    while (next < n_blocks) {
        const std::size_t batch = std::min<std::size_t>(n_workers, n_blocks - next);
        std::vector<std::future<BlockResult>> futs;
        futs.reserve(batch);
        for (std::size_t j = 0; j < batch; ++j)
            futs.push_back(std::async(std::launch::async, run_block, next + j));
        for (std::size_t j = 0; j < batch; ++j) results[next + j] = futs[j].get();
        next += batch;
    }

    // combine block partials in block order: result independent of scheduling
    TrajectoryEnsemble ens;
    ens.n_traj = n_traj;
    ens.times = t_grid;
    std::vector<Matrix> sum_outer(n_out, Matrix::Zero(d, d));
    std::vector<Eigen::MatrixXd> sum_abs2(n_out, Eigen::MatrixXd::Zero(d, d));
    std::vector<double> sum_n2(n_out, 0.0), sum_n4(n_out, 0.0);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        for (std::size_t k = 0; k < n_out; ++k) {
            sum_outer[k] += results[b].sum_outer[k];
            sum_abs2[k] += results[b].sum_abs2[k];
            sum_n2[k] += results[b].sum_n2[k];
            sum_n4[k] += results[b].sum_n4[k];
        }
        ens.resampled += results[b].resampled;
        for (auto& tr : results[b].kept) ens.trajectories.push_back(std::move(tr));
    }
    if (ens.resampled > n_traj / 100)
        throw NumericalError("run_ensemble: more than 1% of trajectories resampled",
                             static_cast<double>(ens.resampled), 0.0);

    const double n = static_cast<double>(n_traj);
    ens.reconstruction.reserve(n_out);
    ens.stderr_entries.reserve(n_out);
    for (std::size_t k = 0; k < n_out; ++k) {
        const Matrix mean = sum_outer[k] / n;
        ens.reconstruction.push_back(mean / mean.trace().real());
        const Eigen::MatrixXd var =
            (sum_abs2[k] / n - mean.cwiseAbs2()).cwiseMax(0.0);
        ens.stderr_entries.push_back((var / n).cwiseSqrt());
        const double m2 = sum_n2[k] / n;
        ens.mean_norm2.push_back(m2);
        ens.mean_norm2_stderr.push_back(
            std::sqrt(std::max(0.0, sum_n4[k] / n - m2 * m2) / n));
    }
    return ens;
}

WeightingReport physical_weighting_check(const TrajectoryEnsemble& ensemble) {
    if (ensemble.trajectories.empty())
        throw ValidationError("physical_weighting_check: ensemble has no stored trajectories");
    WeightingReport rep;
    const Eigen::Index d = ensemble.trajectories.front().states.front().size();
    const std::size_t n_out = ensemble.times.size();
    for (std::size_t k = 0; k < n_out; ++k) {
        Matrix raw = Matrix::Zero(d, d);
        Matrix weighted = Matrix::Zero(d, d);
        for (const auto& tr : ensemble.trajectories) {
            const Vector& psi = tr.states[k];
            const double w = tr.norm2[k];
            raw += psi * psi.adjoint();
            const Vector unit = psi / std::sqrt(w);
            weighted += w * (unit * unit.adjoint());
            rep.max_weight_dev = std::max(rep.max_weight_dev, std::abs(w - 1.0));
        }
        const double scale = std::max(1.0, raw.cwiseAbs().maxCoeff());
        rep.max_entry_diff =
            std::max(rep.max_entry_diff, (raw - weighted).cwiseAbs().maxCoeff() / scale);
    }
    rep.identity_holds = rep.max_entry_diff <= 1e-12;
    return rep;
}

}  // namespace cbr
