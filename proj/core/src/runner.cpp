#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cbrlab/csv.hpp"
#include "cbrlab/fock.hpp"
#include "cbrlab/grid.hpp"
#include "cbrlab/grwp.hpp"
#include "cbrlab/ito.hpp"
#include "cbrlab/lindblad.hpp"
#include "cbrlab/oracles.hpp"
#include "cbrlab/scenario.hpp"
#include "cbrlab/spectrum.hpp"

namespace cbr {

namespace {

using json = nlohmann::ordered_json;

std::vector<double> time_grid(double t_max, int n_outputs) {
    if (!(t_max > 0.0)) throw ValidationError("run.t_max must be positive");
    if (n_outputs < 2) throw ValidationError("run.n_outputs must be >= 2");
    std::vector<double> t(n_outputs);
    for (int i = 0; i < n_outputs; ++i)
        t[i] = t_max * static_cast<double>(i) / static_cast<double>(n_outputs - 1);
    return t;
}

std::string unit_of(const std::string& obs, UnitKind kind) {
    if (kind == UnitKind::DimensionlessEngine) return obs + "[engine]";
    if (obs == "time") return "time[s]";
    if (obs == "Q") return "Q[cm]";
    if (obs == "P") return "P[g*cm/s]";
    if (obs == "Q2") return "Q2[cm^2]";
    if (obs == "QP") return "QP[erg*s]";
    if (obs == "P2") return "P2[g^2*cm^2/s^2]";
    if (obs == "K") return "K[erg]";
    if (obs == "T") return "T[K]";
    if (obs == "N") return "N[1]";
    if (obs == "Lambda") return "Lambda[1/s]";
    if (obs == "deltaQ") return "deltaQ[cm]";
    return obs + "[1]";
}

Matrix initial_density(const Scenario& s) {
    const Eigen::Index d = s.run.d;
    bool warn = false;
    if (s.initial.kind == "coherent") return projector(coherent_state(s.initial.alpha, d, &warn));
    if (s.initial.kind == "thermal") return thermal_state(s.initial.nbar, d, &warn);
    if (s.initial.kind == "cat")
        return projector(superposition_state(s.initial.alpha, s.initial.separation, d, &warn));
    throw ValidationError("unknown initial state kind: " + s.initial.kind);
}

Vector initial_vector(const Scenario& s) {
    const Eigen::Index d = s.run.d;
    bool warn = false;
    if (s.initial.kind == "coherent") return coherent_state(s.initial.alpha, d, &warn);
    if (s.initial.kind == "cat")
        return superposition_state(s.initial.alpha, s.initial.separation, d, &warn);
    throw ValidationError("ito engine needs a pure initial state (coherent or cat)");
}

InitialMoments moments_of_initial(const Scenario& s, const ModelParams& p) {
    const double hbar = p.hbar();
    const double Mw = p.M * p.omega;
    InitialMoments im;
    if (s.initial.kind == "coherent") {
        im.Q0 = std::sqrt(2.0 * hbar / Mw) * s.initial.alpha.real();
        im.P0 = std::sqrt(2.0 * hbar * Mw) * s.initial.alpha.imag();
        const double vq = hbar / (2.0 * Mw), vp = hbar * Mw / 2.0;
        im.Q2_0 = vq + im.Q0 * im.Q0;
        im.P2_0 = vp + im.P0 * im.P0;
        im.QP_0 = 2.0 * im.Q0 * im.P0;
    } else if (s.initial.kind == "thermal") {
        const double f = 2.0 * s.initial.nbar + 1.0;
        im.Q2_0 = f * hbar / (2.0 * Mw);
        im.P2_0 = f * hbar * Mw / 2.0;
    } else {
        throw ValidationError("oracles engine supports coherent or thermal initial states");
    }
    im.validate(hbar);
    return im;
}

double auto_dt(const ModelParams& pe, double requested) {
    const double fastest =
        std::max(pe.omega, pe.N * pe.Lambda * (1.0 + 2.0 * pe.occupation()));
    const double bound = 0.01 / fastest;
    if (requested > 0.0) {
        if (requested > bound * (1.0 + 1e-12))
            throw ValidationError("run.dt does not resolve the fastest scale");
        return requested;
    }
    return 0.5 * bound;
}

void add_series_table(ResultBundle& bundle, const std::string& filename,
                      const EvolutionRecord& rec, const std::vector<std::string>& obs,
                      UnitKind kind) {
    std::vector<std::string> headers{unit_of("time", kind)};
    for (const auto& o : obs) headers.push_back(unit_of(o, kind));
    CsvTable table(headers);
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        std::vector<double> row{rec.times[i]};
        for (const auto& o : obs) row.push_back(rec.observables.at(o)[i]);
        table.add_row(row);
    }
    bundle.tables.emplace_back(filename, table.str());
}

ResultBundle run_lindblad(const Scenario& s) {
    const ModelParams pe = s.engine_params();
    const auto t_grid = time_grid(s.run.t_max, s.run.n_outputs);
    const LindbladGenerator gen = build_generator(pe, s.run.d);
    const EvolutionRecord rec = evolve_master(gen, initial_density(s), t_grid,
                                              auto_dt(pe, s.run.dt),
                                              standard_observables(pe, s.run.d));
    ResultBundle bundle;
    add_series_table(bundle, "series.csv", rec, s.observables, s.units);
    return bundle;
}

ResultBundle run_ito(const Scenario& s, int threads) {
    const ModelParams pe = s.engine_params();
    const auto t_grid = time_grid(s.run.t_max, s.run.n_outputs);
    WienerConfig cfg;
    cfg.Lambda = pe.Lambda;
    cfg.dt = auto_dt(pe, s.run.dt);
    cfg.master_seed = s.run.seed;
    cfg.n_channels = pe.occupation() > 0.0 ? 2 : 1;
    EnsembleOptions opts;
    opts.keep_trajectories = false;
    opts.threads = threads;
    const TrajectoryEnsemble ens =
        run_ensemble(pe, initial_vector(s), static_cast<std::size_t>(s.run.n_traj), t_grid,
                     cfg, opts);

    const NamedOps ops = standard_observables(pe, s.run.d);
    std::vector<std::string> headers{unit_of("time", s.units)};
    for (const auto& o : s.observables) headers.push_back(unit_of(o, s.units));
    headers.push_back("mean_norm2[1]");
    headers.push_back("mean_norm2_stderr[1]");
    CsvTable table(headers);
    for (std::size_t i = 0; i < ens.times.size(); ++i) {
        const Matrix& rho = ens.reconstruction[i];
        std::vector<double> row{ens.times[i]};
        for (const auto& name : s.observables) {
            if (name == "purity") row.push_back(purity(rho));
            else if (name == "S_l") row.push_back(linear_entropy(rho));
            else if (name == "S_s") row.push_back(von_neumann_entropy(rho));
            else {
                for (const auto& [n2, op] : ops)
                    if (n2 == name) row.push_back(real_expectation(rho, op));
            }
        }
        row.push_back(ens.mean_norm2[i]);
        row.push_back(ens.mean_norm2_stderr[i]);
        table.add_row(row);
    }
    ResultBundle bundle;
    bundle.tables.emplace_back("series.csv", table.str());
    return bundle;
}

void add_snapshot(ResultBundle& bundle, const std::string& name, const GridDensity& g) {
    std::vector<std::string> headers{"Q[engine]"};
    for (Eigen::Index k = 0; k < g.spec.n; ++k)
        headers.push_back("re_rho_" + std::to_string(k));
    CsvTable re(headers);
    for (Eigen::Index j = 0; j < g.spec.n; ++j) {
        std::vector<double> row{g.spec.q(j)};
        for (Eigen::Index k = 0; k < g.spec.n; ++k) row.push_back(g.values(j, k).real());
        re.add_row(row);
    }
    bundle.tables.emplace_back(name, re.str());
}

ResultBundle run_grid(const Scenario& s) {
    const ModelParams pe = s.engine_params();
    GridSpec spec{s.grid.L, s.grid.n};
    const double sep = s.initial.separation;
    const GridDensity rho0 = gaussian_cat_density(spec, sep, s.grid.sigma);
    const double window = s.grid.fit_window > 0.0
                              ? s.grid.fit_window
                              : 0.1 / std::max(pe.omega, pe.N * pe.Lambda);
    const auto t_grid = time_grid(window, s.run.n_outputs);
    const double cfl = 0.2 * spec.dQ() * spec.dQ() * pe.M / pe.hbar();
    const double dt = s.run.dt > 0.0 ? s.run.dt : 0.5 * cfl;
    const auto series = evolve_grid(rho0, pe, t_grid, dt);

    const double Qa = 0.5 * sep, Qb = -0.5 * sep;
    const DecayFit fit = fit_offdiag_decay(series, t_grid, Qa, Qb);
    const double zeta_formula = offdiag_decay_rate(pe, sep);

    ResultBundle bundle;
    {
        CsvTable table({unit_of("time", s.units), "abs_offdiag[1/engine-length]"});
        const auto ja = static_cast<Eigen::Index>(std::lround((Qa + spec.L) / spec.dQ()));
        const auto jb = static_cast<Eigen::Index>(std::lround((Qb + spec.L) / spec.dQ()));
        for (std::size_t i = 0; i < series.size(); ++i)
            table.add_row({t_grid[i], std::abs(series[i].values(ja, jb))});
        bundle.tables.emplace_back("offdiag.csv", table.str());
    }
    {
        CsvTable table({"zeta_fit[1/engine-time]", "zeta_formula[1/engine-time]",
                        "rel_deviation[1]", "r_squared[1]"});
        table.add_row({fit.zeta, zeta_formula,
                       std::abs(fit.zeta - zeta_formula) / zeta_formula, fit.r_squared});
        bundle.tables.emplace_back("summary.csv", table.str());
    }
    add_snapshot(bundle, "snapshot_first.csv", series.front());
    add_snapshot(bundle, "snapshot_last.csv", series.back());
    return bundle;
}

// cartesian product of sweep axes, rows sorted by axis values in order
void sweep_rows(const std::vector<SweepAxis>& axes, std::vector<std::vector<double>>& out) {
    std::vector<double> cur(axes.size());
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == axes.size()) {
            out.push_back(cur);
            return;
        }
        std::vector<double> vals = axes[k].values;
        std::sort(vals.begin(), vals.end());
        for (double v : vals) {
            cur[k] = v;
            rec(k + 1);
        }
    };
    rec(0);
}

ModelParams apply_axes(const ModelParams& base, const std::vector<SweepAxis>& axes,
                       const std::vector<double>& values) {
    ModelParams p = base;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string& n = axes[i].name;
        if (n == "T") p.T = values[i];
        else if (n == "N") {
            p.N = values[i];
            p.M = p.N * p.m;
        } else if (n == "Lambda") p.Lambda = values[i];
    }
    return p;
}

ResultBundle run_oracles(const Scenario& s) {
    ResultBundle bundle;
    const ModelParams& p = s.params;
    if (s.oracle.task == "moments") {
        if (!s.sweep.empty())
            throw ValidationError("oracle.task=moments does not support sweeps");
        ModelParams pp = p;
        if (s.nbar_override) {
            if (s.units == UnitKind::CGS) throw ValidationError("nbar override requires engine units");
            pp.T = *s.nbar_override > 0.0 ? 1.0 / std::log1p(1.0 / *s.nbar_override) : 0.0;
        }
        const InitialMoments im = moments_of_initial(s, pp);
        const auto t_grid = time_grid(s.run.t_max, s.run.n_outputs);
        std::vector<std::string> headers{unit_of("time", s.units)};
        for (const auto& o : s.observables) headers.push_back(unit_of(o, s.units));
        CsvTable table(headers);
        for (double t : t_grid) {
            const auto [Q, P] = first_moments(t, pp, im);
            const SecondMoments sm = second_moments(t, pp, im, pp.dims);
            const double K = kinetic_energy(t, pp, im, pp.dims);
            std::vector<double> row{t};
            for (const auto& o : s.observables) {
                if (o == "Q") row.push_back(Q);
                else if (o == "P") row.push_back(P);
                else if (o == "Q2") row.push_back(sm.Q2);
                else if (o == "QP") row.push_back(sm.QP);
                else if (o == "P2") row.push_back(sm.P2);
                else if (o == "K") row.push_back(K);
            }
            table.add_row(row);
        }
        bundle.tables.emplace_back("series.csv", table.str());
        return bundle;
    }
    if (s.oracle.task == "lambda_estimate") {
        const double L = estimate_lambda(p.N, s.oracle.tau_R, s.oracle.K_s, s.oracle.K_eq);
        CsvTable table({"N[1]", "tau_R[s]", "K_s[erg]", "K_eq[erg]", "Lambda[1/s]"});
        table.add_row({p.N, s.oracle.tau_R, s.oracle.K_s, s.oracle.K_eq, L});
        bundle.tables.emplace_back("lambda.csv", table.str());
        return bundle;
    }
    if (s.oracle.task == "decoherence_time") {
        const DecoherenceRegime regime = s.oracle.regime == "low_frequency"
                                             ? DecoherenceRegime::low_frequency
                                             : DecoherenceRegime::general;
        std::vector<std::string> headers;
        for (const auto& ax : s.sweep) headers.push_back(unit_of(ax.name, s.units));
        headers.push_back("deltaQ[cm]");
        headers.push_back("tau_D[s]");
        if (s.oracle.grwp_comparison) {
            headers.push_back("grwp_lambda_cm[1/s]");
            headers.push_back("grwp_lambda_cm_time[s]");
        }
        CsvTable table(headers);
        std::vector<std::vector<double>> rows;
        if (s.sweep.empty()) rows.push_back({});
        else sweep_rows(s.sweep, rows);
        for (const auto& vals : rows) {
            ModelParams pp = apply_axes(p, s.sweep, vals);
            double dq = s.oracle.deltaQ;
            for (std::size_t i = 0; i < s.sweep.size(); ++i)
                if (s.sweep[i].name == "deltaQ") dq = vals[i];
            const double tau = decoherence_time({pp, dq, regime});
            std::vector<double> row = vals;
            row.push_back(dq);
            row.push_back(tau);
            if (s.oracle.grwp_comparison) {
                const double lam_micro =
                    s.grwp.zeta * std::pow(s.grwp.alpha / (4.0 * M_PI), 1.5);
                const double lcm = lambda_cm(s.grwp.n, lam_micro);
                row.push_back(lcm);
                row.push_back(1.0 / lcm);
            }
            table.add_row(row);
        }
        bundle.tables.emplace_back("decoherence.csv", table.str());
        return bundle;
    }
    throw ValidationError("unknown oracle task: " + s.oracle.task);
}

ResultBundle run_grwp(const Scenario& s) {
    const CslParams csl =
        CslParams::make(s.grwp.alpha, s.grwp.zeta, s.grwp.D0, s.grwp.S_i, s.grwp.n);
    ResultBundle bundle;
    {
        CsvTable table({"lambda_micro[1/s]", "lambda_cm[1/s]", "lambda_cm_time[s]",
                        "delta_i[1/cm^5]", "energy_rate_per_Si[erg/(s*cm^2)]"});
        const double lcm = lambda_cm(csl.n, csl.lambda_micro);
        table.add_row({csl.lambda_micro, lcm, 1.0 / lcm, delta_i(csl),
                       csl_energy_rate(csl, s.grwp.M)});
        bundle.tables.emplace_back("baseline.csv", table.str());
    }
    {
        CsvTable table({"time[s]", "Q2[cm^2]", "P2[g^2*cm^2/s^2]"});
        for (double t : time_grid(s.grwp.t_max, s.grwp.n_outputs)) {
            const Spreading sp = csl_spreading(t, csl, s.grwp.M, {0.0, 0.0});
            table.add_row({t, sp.Q2, sp.P2});
        }
        bundle.tables.emplace_back("spreading.csv", table.str());
    }
    return bundle;
}

ResultBundle run_integral(const Scenario& s) {
    const PhysicalConstants consts =
        s.units == UnitKind::CGS ? cgs_constants() : PhysicalConstants{1.0, 1.0};
    double base_p = 0.0;
    const double base_xi = s.params.omega * s.params.tau_c;
    if (s.nbar_override) base_p = std::log1p(1.0 / *s.nbar_override);
    else if (s.params.T > 0.0)
        base_p = consts.hbar * s.params.omega / (consts.k_B * s.params.T);
    std::vector<std::pair<double, double>> points;  // (p, xi)
    if (s.sweep.empty()) {
        points.emplace_back(base_p, base_xi);
    } else {
        std::vector<std::vector<double>> rows;
        sweep_rows(s.sweep, rows);
        for (const auto& vals : rows) {
            double pp = base_p, xx = base_xi;
            for (std::size_t i = 0; i < s.sweep.size(); ++i) {
                if (s.sweep[i].name == "p") pp = vals[i];
                else if (s.sweep[i].name == "xi") xx = vals[i];
                else if (s.sweep[i].name == "T")
                    pp = consts.hbar * s.params.omega / (consts.k_B * vals[i]);
            }
            points.emplace_back(pp, xx);
        }
    }
    CsvTable table({"p[1]", "xi[1]", "I_quadrature[1]", "I_residue[1]", "I_approx[1]"});
    for (const auto& [pp, xx] : points) {
        if (!(pp > 0.0)) throw ValidationError("integral engine needs T > 0 (or a p axis)");
        LorentzianSpectrum spec{1.0, xx};
        const double T = 1.0 / pp;  // engine convention hbar = k_B = 1, omega = 1
        const PhysicalConstants eng{1.0, 1.0};
        const double quad = integral_I_quadrature(spec, T, 0.01, 1e-9, eng);
        double residue = std::numeric_limits<double>::quiet_NaN();
        if (xx / pp < 1.0) residue = integral_I_residue(ThermalParams::make(pp, xx), 10000);
        const double approx = integral_I_approx(1.0, T, eng);
        table.add_row({pp, xx, quad, residue, approx});
    }
    ResultBundle bundle;
    bundle.tables.emplace_back("integral.csv", table.str());
    return bundle;
}

}  // namespace

CrossValidationReport cross_validate(const Scenario& a, const Scenario& b, int threads) {
    auto kinds = std::make_pair(a.engine, b.engine);
    const Scenario* dyn = &a;
    const Scenario* ref = &b;
    auto is_pair = [&](EngineKind x, EngineKind y) {
        if (kinds.first == x && kinds.second == y) return true;
        if (kinds.first == y && kinds.second == x) {
            std::swap(dyn, ref);
            return true;
        }
        return false;
    };

    CrossValidationReport rep;
    rep.name = a.name + " vs " + b.name;

    if (is_pair(EngineKind::ito, EngineKind::lindblad)) {
        // dyn = ito side
        if (dyn->engine != EngineKind::ito) std::swap(dyn, ref);
        const ModelParams pe = dyn->engine_params();
        const auto t_grid = time_grid(dyn->run.t_max, dyn->run.n_outputs);
        WienerConfig cfg;
        cfg.Lambda = pe.Lambda;
        cfg.dt = auto_dt(pe, dyn->run.dt);
        cfg.master_seed = dyn->run.seed;
        EnsembleOptions opts;
        opts.keep_trajectories = false;
        opts.threads = threads;
        const auto ens = run_ensemble(pe, initial_vector(*dyn),
                                      static_cast<std::size_t>(dyn->run.n_traj), t_grid, cfg,
                                      opts);
        const auto rec = evolve_master(build_generator(pe, dyn->run.d),
                                       projector(initial_vector(*dyn)), t_grid,
                                       auto_dt(pe, dyn->run.dt));
        rep.metric_name = "trace_distance_at_final_time";
        rep.metric = trace_distance(ens.reconstruction.back(), rec.states.back());
        rep.tolerance = 0.05;
        rep.pass = rep.metric <= rep.tolerance;
        return rep;
    }
    if (is_pair(EngineKind::lindblad, EngineKind::oracles)) {
        if (dyn->engine != EngineKind::lindblad) std::swap(dyn, ref);
        const ModelParams pe = dyn->engine_params();
        const auto t_grid = time_grid(dyn->run.t_max, dyn->run.n_outputs);
        const auto rec = evolve_master(build_generator(pe, dyn->run.d),
                                       initial_density(*dyn), t_grid,
                                       auto_dt(pe, dyn->run.dt),
                                       standard_observables(pe, dyn->run.d));
        const InitialMoments im = moments_of_initial(*dyn, pe);
        double worst = 0.0;
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const double t = t_grid[i];
            const auto [Q, P] = first_moments(t, pe, im);
            const SecondMoments sm = second_moments(t, pe, im, 1);
            auto rel = [](double got, double want, double floor) {
                return std::abs(got - want) / std::max(std::abs(want), floor);
            };
            worst = std::max(worst, rel(rec.observables.at("Q")[i], Q, 1e-3));
            worst = std::max(worst, rel(rec.observables.at("P")[i], P, 1e-3));
            worst = std::max(worst, rel(rec.observables.at("Q2")[i], sm.Q2, 1e-6));
            worst = std::max(worst, rel(rec.observables.at("QP")[i], sm.QP, 1e-3));
            worst = std::max(worst, rel(rec.observables.at("P2")[i], sm.P2, 1e-6));
        }
        rep.metric_name = "max_relative_moment_error";
        rep.metric = worst;
        rep.tolerance = 1e-3;
        rep.pass = rep.metric <= rep.tolerance;
        return rep;
    }
    if (is_pair(EngineKind::grid, EngineKind::oracles)) {
        if (dyn->engine != EngineKind::grid) std::swap(dyn, ref);
        const ModelParams pe = dyn->engine_params();
        GridSpec spec{dyn->grid.L, dyn->grid.n};
        const double sep = dyn->initial.separation;
        const GridDensity rho0 = gaussian_cat_density(spec, sep, dyn->grid.sigma);
        const double window = dyn->grid.fit_window > 0.0
                                  ? dyn->grid.fit_window
                                  : 0.1 / std::max(pe.omega, pe.N * pe.Lambda);
        const auto t_grid = time_grid(window, dyn->run.n_outputs);
        const double cfl = 0.2 * spec.dQ() * spec.dQ() * pe.M / pe.hbar();
        const auto series = evolve_grid(rho0, pe, t_grid,
                                        dyn->run.dt > 0.0 ? dyn->run.dt : 0.5 * cfl);
        const DecayFit fit = fit_offdiag_decay(series, t_grid, 0.5 * sep, -0.5 * sep);
        const double want = offdiag_decay_rate(pe, sep);
        rep.metric_name = "zeta_relative_deviation";
        rep.metric = std::abs(fit.zeta - want) / want;
        rep.tolerance = 0.05;
        rep.pass = rep.metric <= rep.tolerance;
        return rep;
    }
    throw ValidationError("cross_validate: incompatible engine pair " + engine_name(a.engine) +
                          " / " + engine_name(b.engine));
}

ResultBundle run_scenario(const Scenario& s_in, std::optional<std::uint64_t> seed_override,
                          int threads) {
    Scenario s = s_in;
    if (seed_override) s.run.seed = *seed_override;
    const auto t0 = std::chrono::steady_clock::now();

    ResultBundle bundle;
    bool crossval_pass = true;
    switch (s.engine) {
        case EngineKind::lindblad: bundle = run_lindblad(s); break;
        case EngineKind::ito: bundle = run_ito(s, threads); break;
        case EngineKind::grid: bundle = run_grid(s); break;
        case EngineKind::oracles: bundle = run_oracles(s); break;
        case EngineKind::grwp: bundle = run_grwp(s); break;
        case EngineKind::integral: bundle = run_integral(s); break;
        case EngineKind::crossval: {
            const Scenario a = load_scenario_ref(
                is_builtin_ref(s.crossval_pair[0]) ? s.crossval_pair[0]
                                                   : "builtin:" + s.crossval_pair[0]);
            const Scenario b = load_scenario_ref(
                is_builtin_ref(s.crossval_pair[1]) ? s.crossval_pair[1]
                                                   : "builtin:" + s.crossval_pair[1]);
            const CrossValidationReport rep = cross_validate(a, b, threads);
            CsvTable table({"pair", "metric_name", "metric[1]", "tolerance[1]", "pass"});
            table.add_text_row({rep.name, rep.metric_name, CsvTable::format_double(rep.metric),
                                CsvTable::format_double(rep.tolerance),
                                rep.pass ? "true" : "false"});
            bundle.tables.emplace_back("report.csv", table.str());
            crossval_pass = rep.pass;
            break;
        }
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest;
    manifest["name"] = s.name;
    manifest["engine"] = engine_name(s.engine);
    manifest["seed"] = s.run.seed;
    manifest["code_version"] = "cbrlab 0.1.0";
    manifest["wall_time_s"] = wall;
    if (s.engine == EngineKind::crossval) manifest["crossval_pass"] = crossval_pass;
    json tables = json::array();
    for (const auto& [name, _] : bundle.tables) tables.push_back(name);
    manifest["tables"] = tables;
    manifest["scenario"] = s.canonical_text();
    bundle.manifest_json = manifest.dump(2) + "\n";
    return bundle;
}

}  // namespace cbr
