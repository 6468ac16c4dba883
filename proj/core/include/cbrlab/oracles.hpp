#pragma once

#include <utility>

#include "cbrlab/errors.hpp"
#include "cbrlab/units.hpp"

namespace cbr {

// Per-dimension initial moments. Q2_0 etc. are raw second moments <Q^2>_0.
struct InitialMoments {
    double Q0 = 0.0;
    double P0 = 0.0;
    double Q2_0 = 0.0;
    double P2_0 = 0.0;
    double QP_0 = 0.0;  // <{Q,P}>_0

    void validate(double hbar) const;
    double varQ() const { return Q2_0 - Q0 * Q0; }
    double varP() const { return P2_0 - P0 * P0; }
    double covQP() const { return QP_0 - 2.0 * Q0 * P0; }  // <Delta{Q,P}>_0
};

struct SecondMoments {
    double Q2;
    double QP;  // <{Q,P}>
    double P2;
};

enum class DecoherenceRegime { general, low_frequency };

struct DecoherenceQuery {
    ModelParams params;
    double deltaQ = 1.0;  // superposition separation
    DecoherenceRegime regime = DecoherenceRegime::general;

    void validate() const {
        params.validate();
        if (!(deltaQ > 0.0)) throw ValidationError("DecoherenceQuery.deltaQ: must be positive");
    }
};

// First moments: <P> = exp(-N Lambda t/2) P0, <Q> = exp(-N Lambda t/2)(Q0 + P0 t/M).
std::pair<double, double> first_moments(double t, const ModelParams& params,
                                        const InitialMoments& init);

// Closed-form second moments of the damped-and-driven system; the temperature
// drive enters through I = 1 + 2<n>_omega per dimension. Inputs are
// per-dimension, outputs are summed over `dims` identical dimensions.
SecondMoments second_moments(double t, const ModelParams& params, const InitialMoments& init,
                             int dims);

// Exponential thermalization of the kinetic energy toward K_eq.
double kinetic_energy(double t, const ModelParams& params, const InitialMoments& init,
                      int dims);
double equilibrium_kinetic(const ModelParams& params, int dims);

// Coupling strength from the relaxation-time relation
// Lambda = ln((K_s - K_eq)/K_eq) / (N tau_R). K_s <= K_eq is a domain error.
double estimate_lambda(double N, double tau_R, double K_s, double K_eq);

// Positional-decoherence diffusion constant D = N M Lambda omega (1+2<n>)/4 hbar.
double diffusion_constant(const ModelParams& params);

// Off-diagonal decay timescale. General regime: 1/(D (dQ)^2). Low-frequency
// regime: hbar^2 / (2 N Lambda M k_B T (dQ)^2). The low-frequency form keeps
// the paper's printed convention, which is a factor 4 below substituting the
// occupation asymptote 2 k_B T/(hbar omega) into the general form.
double decoherence_time(const DecoherenceQuery& query);

// zeta = D (dQ)^2; reciprocal of the general-regime decoherence time.
double offdiag_decay_rate(const ModelParams& params, double deltaQ);

struct Variances {
    double varQ;
    double varP;
    double covQP;  // <Delta{Q,P}>
};

// Weak-coupling linear-entropy rate 4 D (varQ + varP/(N m omega)^2) per
// dimension, summed over dims.
double entropy_rate(const ModelParams& params, const Variances& v, int dims);

// Weak-coupling linear entropy along free evolution: cubic polynomial,
// the time integral of entropy_rate with freely spreading variances.
double entropy_poly(double t, const ModelParams& params, const InitialMoments& init, int dims);

}  // namespace cbr
