#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cbrlab/errors.hpp"
#include "cbrlab/units.hpp"

namespace cbr {

enum class EngineKind { lindblad, ito, grid, oracles, grwp, integral, crossval };

std::string engine_name(EngineKind e);

struct InitialStateSpec {
    std::string kind = "coherent";  // coherent | thermal | cat
    std::complex<double> alpha{0.0, 0.0};
    double nbar = 0.0;
    double separation = 4.0;  // mode-length units
};

struct RunSpec {
    int d = 40;            // Fock truncation
    double t_max = 10.0;
    int n_outputs = 20;
    double dt = 0.0;       // 0 = auto from the fastest scale
    std::uint64_t seed = 1;
    int n_traj = 2000;
};

struct GridSectionSpec {
    double L = 6.5;
    int n = 128;
    double sigma = 1.0;
    double fit_window = 0.0;  // 0 = auto
};

struct OracleTaskSpec {
    std::string task = "moments";  // moments | lambda_estimate | decoherence_time
    double tau_R = 0.0;
    double K_s = 0.0;
    double K_eq = 0.0;
    double deltaQ = 1.0;
    std::string regime = "general";  // general | low_frequency
    bool grwp_comparison = false;
};

struct GrwpSectionSpec {
    double alpha = 1e10;
    double zeta = 1e-30;
    double D0 = 1e24;
    double S_i = 1.0;
    double n = 1e23;
    double M = 1.0;
    double t_max = 1.0;
    int n_outputs = 10;
};

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

struct Scenario {
    std::string name;
    EngineKind engine = EngineKind::oracles;
    UnitKind units = UnitKind::DimensionlessEngine;
    ModelParams params;               // expressed in `units`
    std::optional<double> nbar_override;  // occupation given instead of T
    InitialStateSpec initial;
    RunSpec run;
    GridSectionSpec grid;
    OracleTaskSpec oracle;
    GrwpSectionSpec grwp;
    std::vector<SweepAxis> sweep;
    std::vector<std::string> observables;
    std::vector<std::string> crossval_pair;  // builtin names for engine=crossval

    // Parameters in engine units, with nbar_override folded into T.
    ModelParams engine_params() const;
    double occupation() const;
    std::string canonical_text() const;
};

// Strict parser: unknown sections/keys are rejected with a near-miss
// suggestion; all validation errors are reported together.
Scenario parse_scenario_text(const std::string& text, const std::string& origin);
Scenario parse_scenario(const std::filesystem::path& path);

// Built-in scenarios (addressable as "builtin:<name>").
std::vector<std::pair<std::string, std::string>> list_builtin();  // (name, description)
std::string builtin_scenario_text(const std::string& name);
bool is_builtin_ref(const std::string& ref);
Scenario load_scenario_ref(const std::string& ref);  // path or builtin:<name>

struct ResultBundle {
    std::string manifest_json;
    std::vector<std::pair<std::string, std::string>> tables;  // filename -> csv text

    void write(const std::filesystem::path& dir) const;
};

ResultBundle run_scenario(const Scenario& s, std::optional<std::uint64_t> seed_override = {},
                          int threads = 0);

struct CrossValidationReport {
    std::string name;
    std::string metric_name;
    double metric = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string details;
};

// Consistency suite between two compatible engines on matched parameters.
CrossValidationReport cross_validate(const Scenario& a, const Scenario& b, int threads = 0);

}  // namespace cbr
