#include "cbrlab/units.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cbr {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ValidationError("ModelParams." + field + ": " + what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ModelParams::validate() const {
    require(finite(N) && N >= 1.0, "N", "must be finite and >= 1");
    require(finite(m) && m > 0.0, "m", "must be finite and positive");
    require(finite(M) && M > 0.0, "M", "must be finite and positive");
    require(std::abs(M - N * m) <= 1e-12 * std::abs(M), "M", "must equal N*m");
    require(finite(omega) && omega > 0.0, "omega", "must be finite and positive");
    require(finite(Lambda) && Lambda >= 0.0, "Lambda", "must be finite and non-negative");
    require(finite(tau_c) && tau_c > 0.0, "tau_c", "must be finite and positive");
    require(finite(T) && T >= 0.0, "T", "must be finite and non-negative");
    require(dims == 1 || dims == 3, "dims", "must be 1 or 3");
}

double ModelParams::hbar_omega_over_kT() const {
    if (T == 0.0) return std::numeric_limits<double>::infinity();
    return hbar() * omega / (k_B() * T);
}

double ModelParams::occupation() const {
    const double p = hbar_omega_over_kT();
    if (std::isinf(p)) return 0.0;
    return 1.0 / std::expm1(p);
}

ModelParams ModelParams::engine(double N, double Lambda, double nbar, int dims, double xi) {
    ModelParams p;
    p.N = N;
    p.m = 1.0;
    p.M = N;
    p.omega = 1.0;
    p.Lambda = Lambda;
    p.tau_c = xi;
    p.T = nbar > 0.0 ? 1.0 / std::log1p(1.0 / nbar) : 0.0;
    p.dims = dims;
    p.kind = UnitKind::DimensionlessEngine;
    p.validate();
    return p;
}

UnitSystem engine_unit_system(const ModelParams& cgs_params, const PhysicalConstants& consts) {
    cgs_params.validate();
    consts.validate();
    UnitSystem u;
    u.kind = UnitKind::DimensionlessEngine;
    u.scale_time = 1.0 / cgs_params.omega;
    u.scale_mass = cgs_params.m;
    u.scale_length = std::sqrt(consts.hbar * u.scale_time / u.scale_mass);
    return u;
}

ModelParams to_engine_units(const ModelParams& p, const UnitSystem& unit,
                            const PhysicalConstants& consts) {
    p.validate();
    unit.validate();
    consts.validate();
    ModelParams e = p;
    e.omega = p.omega * unit.scale_time;
    e.Lambda = p.Lambda * unit.scale_time;
    e.tau_c = p.tau_c / unit.scale_time;
    e.m = p.m / unit.scale_mass;
    e.M = p.M / unit.scale_mass;
    // k_B T expressed against the engine energy unit hbar/scale_time.
    e.T = p.T * consts.k_B * unit.scale_time / consts.hbar;
    e.kind = unit.kind;
    e.validate();
    return e;
}

ModelParams from_engine_units(const ModelParams& e, const UnitSystem& unit,
                              const PhysicalConstants& consts) {
    e.validate();
    unit.validate();
    consts.validate();
    ModelParams p = e;
    p.omega = e.omega / unit.scale_time;
    p.Lambda = e.Lambda / unit.scale_time;
    p.tau_c = e.tau_c * unit.scale_time;
    p.m = e.m * unit.scale_mass;
    p.M = e.M * unit.scale_mass;
    p.T = e.T * consts.hbar / (consts.k_B * unit.scale_time);
    p.kind = UnitKind::CGS;
    p.validate();
    return p;
}

}  // namespace cbr
