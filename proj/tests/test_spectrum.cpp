#include <doctest.h>

#include <cmath>
#include <complex>

#include "cbrlab/spectrum.hpp"

using namespace cbr;

namespace {

const PhysicalConstants kEngine{1.0, 1.0};

// Engine-convention spectrum for dimensionless (p, xi): omega = 1, tau_c = xi,
// T = 1/p with hbar = k_B = 1.
LorentzianSpectrum spec_of(double xi) { return LorentzianSpectrum{1.0, xi}; }

}  // namespace

TEST_CASE("Lorentzian peak and half-maximum points") {
    const LorentzianSpectrum s{2.0, 0.3};
    CHECK(lorentzian_density(2.0, s) == doctest::Approx(0.3 / M_PI).epsilon(1e-14));
    CHECK(lorentzian_density(2.0 + 1.0 / 0.3, s) ==
          doctest::Approx(0.3 / (2.0 * M_PI)).epsilon(1e-14));
    CHECK(lorentzian_density(2.0 - 1.0 / 0.3, s) ==
          doctest::Approx(0.3 / (2.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("Lorentzian normalizes to one over the real line") {
    // trapezoid in u = tau_c (Omega - omega) plus the analytic Cauchy tails
    const LorentzianSpectrum s{1.0, 0.05};
    double sum = 0.0;
    const int n = 400000;
    const double umax = 4000.0;
    const double du = 2.0 * umax / n;
    for (int i = 0; i <= n; ++i) {
        const double u = -umax + i * du;
        const double Omega = 1.0 + u / s.tau_c;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        sum += w * lorentzian_density(Omega, s) / s.tau_c * du;
    }
    sum += 2.0 / (M_PI * umax);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Planck occupation limits and monotonicity") {
    CHECK(planck_occupation(1e10, 0.0) == 0.0);
    // hbar Omega = k_B T ln 2  ->  occupation 1
    const double T = 2.0;
    const double Omega = std::log(2.0) * T;
    CHECK(planck_occupation(Omega, T, kEngine) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(occupation_from_ratio(1.0) ==
          doctest::Approx(0.5819767068693265).epsilon(1e-15));
    CHECK_THROWS_AS(planck_occupation(0.0, 3.0), ValidationError);
    double prev = 0.0;
    for (double t : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double n = planck_occupation(1.0, t, kEngine);
        CHECK(n > prev);
        prev = n;
    }
}

TEST_CASE("quadrature at T = 0 approaches the normalization for narrow spectra") {
    // occupation identically zero: deviation from 1 is the signed Lorentzian
    // mass beyond the origin, which shrinks like 1/xi
    double prev = 1.0;
    for (double xi : {10.0, 100.0, 1000.0}) {
        const double v = integral_I_quadrature(spec_of(xi), 0.0, 1e-4, 1e-9, kEngine);
        const double dev = std::abs(v - 1.0);
        CHECK(dev < 0.7 / xi);
        CHECK(dev < prev);
        prev = dev;
    }
    // omega_min is a split point, not an excision: the value is stable in it
    const double a = integral_I_quadrature(spec_of(0.05), 0.0, 1e-4, 1e-9, kEngine);
    const double b = integral_I_quadrature(spec_of(0.05), 0.0, 0.01, 1e-9, kEngine);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("residue series matches the quadrature at the standard point") {
    const double p = 5.0, xi = 0.05;
    const double quad = integral_I_quadrature(spec_of(xi), 1.0 / p, 0.01, 1e-9, kEngine);
    const double res = integral_I_residue(ThermalParams::make(p, xi), 10000);
    CHECK(std::abs(res - quad) / std::abs(quad) < 1e-6);
}

TEST_CASE("residue vs quadrature across the validity grid") {
    for (double xi : {0.05, 0.2, 0.5, 1.0}) {
        for (double p : {5.0, 20.0, 40.0}) {
            if (xi / p > 0.05) continue;
            const double quad =
                integral_I_quadrature(spec_of(xi), 1.0 / p, 0.01, 1e-9, kEngine);
            const double res = integral_I_residue(ThermalParams::make(p, xi), 20000);
            INFO("p=" << p << " xi=" << xi << " quad=" << quad << " res=" << res);
            CHECK(std::abs(res - quad) / std::abs(quad) < 1e-5);
        }
    }
}

TEST_CASE("contour pole term reduces to the thermal occupation in phase") {
    // At gamma = p/xi equal to a multiple of 2pi the Lorentzian-pole residue
    // is exactly 1/(e^p - 1); elsewhere it oscillates around it.
    const double p = 5.0;
    const double gamma = 32.0 * M_PI;
    const std::complex<double> em = std::exp(std::complex<double>(-p, -gamma));
    const std::complex<double> pole = em / (1.0 - em);
    CHECK(pole.real() == doctest::Approx(1.0 / std::expm1(p)).epsilon(1e-10));
    CHECK(std::abs(pole.imag()) < 1e-10);
}

TEST_CASE("approximation 1 + 2<n>") {
    CHECK(integral_I_approx(1e9, 0.0) == 1.0);
    const double T = 2.0;
    CHECK(integral_I_approx(std::log(2.0) * T, T, kEngine) ==
          doctest::Approx(3.0).epsilon(1e-14));
    CHECK(integral_I_approx(5.0, 1.0, kEngine) ==
          doctest::Approx(1.0135673098126083).epsilon(1e-14));
}

TEST_CASE("quadrature is monotone non-decreasing in T") {
    double prev = -1.0;
    for (double T : {0.05, 0.1, 0.2, 0.5, 1.0}) {
        const double v = integral_I_quadrature(spec_of(0.05), T, 0.01, 1e-9, kEngine);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    prev = -1.0;
    for (double T : {0.05, 0.1, 0.2, 0.5, 1.0}) {
        const double v = integral_I_approx(1.0, T, kEngine);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("quadrature never falls below its T = 0 value") {
    // the excised Lorentzian mass is the zero-occupation floor
    for (double xi : {0.05, 0.5, 1.0}) {
        const double floor = integral_I_quadrature(spec_of(xi), 0.0, 0.01, 1e-9, kEngine);
        for (double T : {0.1, 0.5, 2.0}) {
            CHECK(integral_I_quadrature(spec_of(xi), T, 0.01, 1e-9, kEngine) >=
                  floor - 1e-10);
        }
    }
    CHECK(integral_I_approx(1.0, 5.0, kEngine) >= 1.0);
}

TEST_CASE("residue regime guard and truncation stability") {
    CHECK_THROWS_AS(integral_I_residue(ThermalParams::make(1.0, 2.0), 100), RegimeError);
    // digamma tail resummation: the result is stable in n_terms well below
    // the xi^2/p envelope
    const ThermalParams tp = ThermalParams::make(5.0, 0.01);
    const double a = integral_I_residue(tp, 1);
    const double b = integral_I_residue(tp, 10000);
    CHECK(std::abs(a - b) < 0.01 * 0.01 / 5.0);
}

TEST_CASE("quadrature failure carries the best estimate") {
    try {
        integral_I_quadrature(spec_of(0.05), 1.0, 0.01, 1e-30, kEngine);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::isfinite(e.best_estimate));
        CHECK(e.error_bound > 1e-30);
    }
}

TEST_CASE("thermal params consistency is enforced") {
    CHECK_THROWS_AS((ThermalParams{5.0, 0.05, 3.0}.validate()), ValidationError);
    const ThermalParams tp = ThermalParams::make(5.0, 0.05);
    CHECK(tp.gamma_ratio == doctest::Approx(100.0).epsilon(1e-14));
}
