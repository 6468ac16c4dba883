#include <doctest.h>

#include <cmath>

#include "cbrlab/spectrum.hpp"
#include "cbrlab/units.hpp"

using namespace cbr;

namespace {

ModelParams macroscopic_cgs() {
    ModelParams p;
    p.kind = UnitKind::CGS;
    p.N = 1e23;
    p.m = 1e-23;
    p.M = 1.0;
    p.omega = 2.0 * M_PI * 1e10;
    p.Lambda = 1e-38;
    p.tau_c = 1e-12;
    p.T = 3.0;
    return p;
}

}  // namespace

TEST_CASE("identity unit system leaves parameters unchanged") {
    const ModelParams p = macroscopic_cgs();
    const ModelParams e = to_engine_units(p, UnitSystem::identity());
    CHECK(e.omega == doctest::Approx(p.omega).epsilon(1e-15));
    CHECK(e.Lambda == doctest::Approx(p.Lambda).epsilon(1e-15));
    CHECK(e.m == doctest::Approx(p.m).epsilon(1e-15));
    CHECK(e.tau_c == doctest::Approx(p.tau_c).epsilon(1e-15));
}

TEST_CASE("scale_time = 1/omega maps omega to one") {
    const ModelParams p = macroscopic_cgs();
    UnitSystem u = UnitSystem::identity();
    u.scale_time = 1.0 / p.omega;
    const ModelParams e = to_engine_units(p, u);
    CHECK(e.omega == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("engine unit system delivers hbar = m = omega = 1") {
    const ModelParams p = macroscopic_cgs();
    const UnitSystem u = engine_unit_system(p);
    const ModelParams e = to_engine_units(p, u);
    CHECK(e.omega == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.m == doctest::Approx(1.0).epsilon(1e-14));
    // hbar in engine units: hbar * scale_time / (scale_mass * scale_length^2)
    const double hbar_e = cgs_constants().hbar * u.scale_time /
                          (u.scale_mass * u.scale_length * u.scale_length);
    CHECK(hbar_e == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("occupation is invariant under unit conversion") {
    const ModelParams p = macroscopic_cgs();
    const ModelParams e = to_engine_units(p, engine_unit_system(p));
    const double n_cgs = planck_occupation(p.omega, p.T);
    CHECK(e.occupation() == doctest::Approx(n_cgs).epsilon(1e-12));
    CHECK(p.occupation() == doctest::Approx(n_cgs).epsilon(1e-12));
}

TEST_CASE("dimensionless groups are invariant to 1e-12") {
    const ModelParams p = macroscopic_cgs();
    const ModelParams e = to_engine_units(p, engine_unit_system(p));
    CHECK(e.N == p.N);
    CHECK(e.Lambda / e.omega == doctest::Approx(p.Lambda / p.omega).epsilon(1e-12));
    CHECK(e.omega * e.tau_c == doctest::Approx(p.omega * p.tau_c).epsilon(1e-12));
    CHECK(e.hbar_omega_over_kT() == doctest::Approx(p.hbar_omega_over_kT()).epsilon(1e-12));
}

TEST_CASE("round trip CGS -> engine -> CGS is the identity") {
    const ModelParams p = macroscopic_cgs();
    const UnitSystem u = engine_unit_system(p);
    const ModelParams back = from_engine_units(to_engine_units(p, u), u);
    CHECK(back.omega == doctest::Approx(p.omega).epsilon(1e-12));
    CHECK(back.Lambda == doctest::Approx(p.Lambda).epsilon(1e-12));
    CHECK(back.tau_c == doctest::Approx(p.tau_c).epsilon(1e-12));
    CHECK(back.m == doctest::Approx(p.m).epsilon(1e-12));
    CHECK(back.M == doctest::Approx(p.M).epsilon(1e-12));
    CHECK(back.T == doctest::Approx(p.T).epsilon(1e-12));
}

TEST_CASE("validation errors name the offending field") {
    ModelParams p = macroscopic_cgs();
    p.omega = -1.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("omega"), ValidationError);
    p = macroscopic_cgs();
    p.T = std::nan("");
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("T"), ValidationError);
    p = macroscopic_cgs();
    p.M = 2.0;  // breaks M = N*m
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("M"), ValidationError);
}

TEST_CASE("engine factory produces the requested occupation") {
    const ModelParams p = ModelParams::engine(4.0, 0.01, 0.5);
    CHECK(p.occupation() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.M == doctest::Approx(4.0));
    const ModelParams p0 = ModelParams::engine(4.0, 0.01, 0.0);
    CHECK(p0.occupation() == 0.0);
}
