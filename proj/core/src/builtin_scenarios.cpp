#include <map>

#include "cbrlab/scenario.hpp"

namespace cbr {

namespace {

struct Builtin {
    const char* description;
    const char* text;
};

// zeta chosen so lambda_micro = zeta (alpha/4pi)^{3/2} is exactly 1e-16 1/s.
const std::map<std::string, Builtin>& builtins() {
    static const std::map<std::string, Builtin> b = {
        {"paper-lambda",
         {"coupling-strength estimate from relaxation to the thermal kinetic energy",
          R"(name = paper-lambda
engine = oracles

[units]
system = cgs

[params]
N = 1e23
m = 1e-23
omega = 1e10
Lambda = 0
tau_c = 1e-12
T = 3

[oracle]
task = lambda_estimate
tau_R = 1e16
K_s = 1e9
K_eq = 1e-16
)"}},
        {"paper-taud-macro",
         {"macroscopic low-frequency decoherence time with the GRWP rate comparison",
          R"(name = paper-taud-macro
engine = oracles

[units]
system = cgs

[params]
N = 1e23
m = 1e-23
omega = 1e10
Lambda = 1e-38
tau_c = 1e-12
T = 3

[oracle]
task = decoherence_time
deltaQ = 1.0
regime = low_frequency
grwp_comparison = true

[grwp]
alpha = 1e10
zeta = 4.4546307657296035e-30
D0 = 1e24
S_i = 1.0
n = 1e23
M = 1.0
)"}},
        {"cosmology-scan",
         {"decoherence-time scan over temperature and particle number",
          R"(name = cosmology-scan
engine = oracles

[units]
system = cgs

[params]
N = 1
m = 1.67e-24
omega = 1e10
Lambda = 1e-38
tau_c = 1e-12
T = 3

[oracle]
task = decoherence_time
deltaQ = 1e-4
regime = low_frequency

[sweep]
axes = T,N
T = logspace:3:3e9:7
N = logspace:1:1e23:12
)"}},
        {"lindblad-standard",
         {"thermal master-equation run on the standard moment-validation point",
          R"(name = lindblad-standard
engine = lindblad

[units]
system = engine

[params]
N = 4
Lambda = 0.3
nbar = 0.5
tau_c = 0.05
dims = 1

[initial]
kind = coherent
alpha_re = 1.0
alpha_im = 1.0

[run]
d = 40
t_max = 2.5
n_outputs = 20
seed = 1
)"}},
        {"oracles-standard",
         {"closed-form moments matching lindblad-standard",
          R"(name = oracles-standard
engine = oracles

[units]
system = engine

[params]
N = 4
Lambda = 0.3
nbar = 0.5
tau_c = 0.05
dims = 1

[initial]
kind = coherent
alpha_re = 1.0
alpha_im = 1.0

[oracle]
task = moments

[run]
t_max = 2.5
n_outputs = 20
)"}},
        {"lindblad-standard-t0",
         {"zero-temperature master-equation partner of ito-standard-t0",
          R"(name = lindblad-standard-t0
engine = lindblad

[units]
system = engine

[params]
N = 4
Lambda = 0.25
nbar = 0
tau_c = 0.05
dims = 1

[initial]
kind = coherent
alpha_re = 1.0
alpha_im = 0.0

[run]
d = 24
t_max = 1.0
n_outputs = 6
seed = 1
)"}},
        {"ito-standard-t0",
         {"zero-temperature 2000-trajectory stochastic ensemble",
          R"(name = ito-standard-t0
engine = ito

[units]
system = engine

[params]
N = 4
Lambda = 0.25
nbar = 0
tau_c = 0.05
dims = 1

[initial]
kind = coherent
alpha_re = 1.0
alpha_im = 0.0

[run]
d = 24
t_max = 1.0
n_outputs = 6
dt = 0.001
seed = 20240601
n_traj = 2000
)"}},
        {"grid-standard",
         {"positional-grid cat-state decay on the standard fit point",
          R"(name = grid-standard
engine = grid

[units]
system = engine

[params]
N = 4
Lambda = 0.0025
nbar = 2
tau_c = 0.05
dims = 1

[initial]
kind = cat
separation = 4.0

[grid]
L = 10
n = 192
sigma = 1.0

[run]
n_outputs = 11
)"}},
        {"integral-grid",
         {"temperature integral by quadrature, residue series and approximation",
          R"(name = integral-grid
engine = integral

[units]
system = engine

[params]
N = 1
Lambda = 0
tau_c = 0.05
nbar = 0.5

[sweep]
axes = p,xi
p = 5,10,20
xi = 0.05,0.2,1.0
)"}},
        {"xv-ito-vs-lindblad",
         {"stochastic-unraveling / master-equation consistency suite",
          R"(name = xv-ito-vs-lindblad
engine = crossval

[crossval]
pair = ito-standard-t0,lindblad-standard-t0
)"}},
        {"xv-lindblad-vs-oracles",
         {"master-equation / closed-form moment consistency suite",
          R"(name = xv-lindblad-vs-oracles
engine = crossval

[crossval]
pair = lindblad-standard,oracles-standard
)"}},
        {"xv-grid-vs-oracles",
         {"positional-grid decay-rate / formula consistency suite",
          R"(name = xv-grid-vs-oracles
engine = crossval

[crossval]
pair = grid-standard,oracles-standard
)"}},
    };
    return b;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> list_builtin() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [name, b] : builtins()) out.emplace_back(name, b.description);
    return out;
}

std::string builtin_scenario_text(const std::string& name) {
    auto it = builtins().find(name);
    if (it == builtins().end()) throw ValidationError("unknown builtin scenario: " + name);
    return it->second.text;
}

}  // namespace cbr
