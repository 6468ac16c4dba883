#pragma once

#include <cmath>
#include <string>

#include "cbrlab/constants.hpp"
#include "cbrlab/errors.hpp"

namespace cbr {

enum class UnitKind { CGS, DimensionlessEngine };

// Scales are "CGS amount per engine unit": t_cgs = t_engine * scale_time, etc.
// Temperature converts through k_B so that hbar*Omega/(k_B*T) is invariant;
// in engine units hbar = k_B = 1 is implied.
struct UnitSystem {
    UnitKind kind = UnitKind::CGS;
    double scale_time = 1.0;    // s per engine unit
    double scale_length = 1.0;  // cm per engine unit
    double scale_mass = 1.0;    // g per engine unit

    void validate() const {
        if (!(scale_time > 0.0) || !(scale_length > 0.0) || !(scale_mass > 0.0))
            throw ValidationError("UnitSystem: all scales must be positive");
    }
    static UnitSystem identity() { return UnitSystem{UnitKind::CGS, 1.0, 1.0, 1.0}; }
};

// Physical inputs of one run. All dynamical engines take these in
// dimensionless engine units (hbar = m = omega = 1); the closed-form
// calculators accept raw CGS.
struct ModelParams {
    double N = 1.0;        // particle count
    double m = 1.0;        // single-particle mass
    double M = 1.0;        // total mass, = N*m
    double omega = 1.0;    // characteristic frequency (rad per time unit)
    double Lambda = 0.0;   // coupling strength (1 per time unit)
    double tau_c = 0.05;   // reservoir correlation time
    double T = 0.0;        // temperature (K in CGS; k_B = 1 convention in engine units)
    int dims = 1;          // spatial dimensions simulated by the engines
    UnitKind kind = UnitKind::DimensionlessEngine;

    void validate() const;

    // hbar and k_B in the unit system the parameters are expressed in.
    double hbar() const { return kind == UnitKind::CGS ? cgs_constants().hbar : 1.0; }
    double k_B() const { return kind == UnitKind::CGS ? cgs_constants().k_B : 1.0; }

    // hbar*omega/(k_B*T); +inf at T = 0.
    double hbar_omega_over_kT() const;
    // Thermal occupation at the characteristic frequency.
    double occupation() const;

    // Engine-unit construction straight from the dimensionless groups.
    static ModelParams engine(double N, double Lambda, double nbar, int dims = 1,
                              double xi = 0.05);
};

// Unit system in which the given CGS parameters become hbar = m = omega = 1.
UnitSystem engine_unit_system(const ModelParams& cgs_params,
                              const PhysicalConstants& consts = cgs_constants());

ModelParams to_engine_units(const ModelParams& cgs_params, const UnitSystem& unit,
                            const PhysicalConstants& consts = cgs_constants());
ModelParams from_engine_units(const ModelParams& engine_params, const UnitSystem& unit,
                              const PhysicalConstants& consts = cgs_constants());

}  // namespace cbr
