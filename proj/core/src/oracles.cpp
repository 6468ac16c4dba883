#include "cbrlab/oracles.hpp"

#include <cmath>

#include "cbrlab/spectrum.hpp"

namespace cbr {

namespace {

// I = 1 + 2<n>_omega in the parameter set's own unit system.
double thermal_I(const ModelParams& params) {
    if (params.T == 0.0) return 1.0;
    return 1.0 + 2.0 * occupation_from_ratio(params.hbar_omega_over_kT());
}

// g(x) = [(1 - e^-x) - x(1 + x/2) e^-x] / x^2, the Q^2 drive shape.
double q2_shape(double x) {
    if (x < 0.02)
        return x * (1.0 / 6.0 + x * (-1.0 / 8.0 + x * (1.0 / 20.0 + x * (-1.0 / 72.0 + x / 336.0))));
    const double E = std::exp(-x);
    return (-std::expm1(-x) - x * (1.0 + 0.5 * x) * E) / (x * x);
}

// h(x) = e^-x - (1 - e^-x)/x, the {Q,P} drive shape.
double qp_shape(double x) {
    if (x < 0.02)
        return x * (-0.5 + x * (1.0 / 3.0 + x * (-1.0 / 8.0 + x * (1.0 / 30.0 - x / 144.0))));
    return std::exp(-x) + std::expm1(-x) / x;
}

}  // namespace

void InitialMoments::validate(double hbar) const {
    const double vq = varQ(), vp = varP();
    if (vq < -1e-10 * std::max(Q2_0, 1.0))
        throw ValidationError("InitialMoments: <Q^2> - <Q>^2 must be non-negative");
    if (vp < -1e-10 * std::max(P2_0, 1.0))
        throw ValidationError("InitialMoments: <P^2> - <P>^2 must be non-negative");
    const double cov = 0.5 * covQP();
    const double min_prod = hbar * hbar / 4.0;
    if (vq * vp - cov * cov < min_prod * (1.0 - 1e-10) - 1e-10)
        throw ValidationError("InitialMoments: uncertainty product below hbar^2/4");
}

std::pair<double, double> first_moments(double t, const ModelParams& params,
                                        const InitialMoments& init) {
    params.validate();
    if (t < 0.0) throw ValidationError("first_moments: t must be >= 0");
    const double damp = std::exp(-0.5 * params.N * params.Lambda * t);
    return {damp * (init.Q0 + init.P0 * t / params.M), damp * init.P0};
}

SecondMoments second_moments(double t, const ModelParams& params, const InitialMoments& init,
                             int dims) {
    params.validate();
    if (t < 0.0) throw ValidationError("second_moments: t must be >= 0");
    if (dims != 1 && dims != 3) throw ValidationError("second_moments: dims must be 1 or 3");
    const double M = params.M;
    const double w = params.omega;
    const double hbar = params.hbar();
    const double I = thermal_I(params);
    const double NL = params.N * params.Lambda;

    // Schrodinger (free) parts, per dimension
    const double Q2_s = init.Q2_0 + (init.QP_0 * t + init.P2_0 * t * t / M) / M;
    const double QP_s = init.QP_0 + 2.0 * init.P2_0 * t / M;
    const double P2_s = init.P2_0;

    if (params.Lambda == 0.0)
        return {dims * Q2_s, dims * QP_s, dims * P2_s};

    const double x = NL * t;
    const double E = std::exp(-x);
    const double one_minus_E = -std::expm1(-x);

    const double P2 = P2_s * E + 0.5 * I * params.N * params.m * hbar * w * one_minus_E;
    const double QP = QP_s * E - I * hbar * w * t * qp_shape(x);
    const double Q2 = Q2_s * E + (I * hbar * w / M) *
                                     (t * t * q2_shape(x) + one_minus_E / (2.0 * w * w));
    return {dims * Q2, dims * QP, dims * P2};
}

double equilibrium_kinetic(const ModelParams& params, int dims) {
    params.validate();
    if (dims != 1 && dims != 3) throw ValidationError("equilibrium_kinetic: dims must be 1 or 3");
    return dims * thermal_I(params) * params.hbar() * params.omega / 4.0;
}

double kinetic_energy(double t, const ModelParams& params, const InitialMoments& init,
                      int dims) {
    params.validate();
    if (t < 0.0) throw ValidationError("kinetic_energy: t must be >= 0");
    const double K_s = dims * init.P2_0 / (2.0 * params.M);
    const double K_eq = equilibrium_kinetic(params, dims);
    return (K_s - K_eq) * std::exp(-params.N * params.Lambda * t) + K_eq;
}

double estimate_lambda(double N, double tau_R, double K_s, double K_eq) {
    if (!(N >= 1.0)) throw ValidationError("estimate_lambda: N must be >= 1");
    if (!(tau_R > 0.0)) throw ValidationError("estimate_lambda: tau_R must be positive");
    if (!(K_eq > 0.0)) throw ValidationError("estimate_lambda: K_eq must be positive");
    if (!(K_s > K_eq))
        throw ValidationError("estimate_lambda: K_s must exceed K_eq (already thermalized)");
    return std::log((K_s - K_eq) / K_eq) / (N * tau_R);
}

double diffusion_constant(const ModelParams& params) {
    params.validate();
    return params.N * params.M * params.Lambda * params.omega * thermal_I(params) /
           (4.0 * params.hbar());
}

double decoherence_time(const DecoherenceQuery& query) {
    query.validate();
    const ModelParams& p = query.params;
    const double dq2 = query.deltaQ * query.deltaQ;
    switch (query.regime) {
        case DecoherenceRegime::general:
            return 1.0 / (diffusion_constant(p) * dq2);
        case DecoherenceRegime::low_frequency: {
            if (!(p.T > 0.0))
                throw ValidationError("decoherence_time: low-frequency regime needs T > 0");
            const double hbar = p.hbar();
            return hbar * hbar / (2.0 * p.N * p.Lambda * p.M * p.k_B() * p.T * dq2);
        }
    }
    throw ValidationError("decoherence_time: unknown regime");
}

double offdiag_decay_rate(const ModelParams& params, double deltaQ) {
    if (!(deltaQ >= 0.0)) throw ValidationError("offdiag_decay_rate: deltaQ must be >= 0");
    return diffusion_constant(params) * deltaQ * deltaQ;
}

double entropy_rate(const ModelParams& params, const Variances& v, int dims) {
    params.validate();
    if (dims != 1 && dims != 3) throw ValidationError("entropy_rate: dims must be 1 or 3");
    if (v.varQ < 0.0 || v.varP < 0.0)
        throw ValidationError("entropy_rate: variances must be non-negative");
    const double nmw = params.N * params.m * params.omega;
    return dims * 4.0 * diffusion_constant(params) * (v.varQ + v.varP / (nmw * nmw));
}

double entropy_poly(double t, const ModelParams& params, const InitialMoments& init, int dims) {
    params.validate();
    if (t < 0.0) throw ValidationError("entropy_poly: t must be >= 0");
    if (dims != 1 && dims != 3) throw ValidationError("entropy_poly: dims must be 1 or 3");
    const double D = diffusion_constant(params);
    const double nmw = params.N * params.m * params.omega;
    const double M = params.M;
    const double lin = init.varQ() + init.varP() / (nmw * nmw);
    const double quad = init.covQP() / (2.0 * M);
    const double cub = init.varP() / (3.0 * M * M);
    return dims * 4.0 * D * t * (lin + t * (quad + t * cub));
}

}  // namespace cbr
