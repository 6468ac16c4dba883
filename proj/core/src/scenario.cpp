#include "cbrlab/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cbrlab/csv.hpp"

namespace cbr {

std::string engine_name(EngineKind e) {
    switch (e) {
        case EngineKind::lindblad: return "lindblad";
        case EngineKind::ito: return "ito";
        case EngineKind::grid: return "grid";
        case EngineKind::oracles: return "oracles";
        case EngineKind::grwp: return "grwp";
        case EngineKind::integral: return "integral";
        case EngineKind::crossval: return "crossval";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string suggest(const std::string& key, const std::vector<std::string>& known) {
    std::string best;
    std::size_t best_d = 3;
    for (const auto& k : known) {
        const std::size_t d = levenshtein(key, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best.empty() ? "" : " (did you mean '" + best + "'?)";
}

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

using SectionMap = std::map<std::string, std::map<std::string, Entry>>;

class Parser {
public:
    Parser(const std::string& text, const std::string& origin) : origin_(origin) {
        std::istringstream in(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find_first_of("#;");
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    error(lineno, "malformed section header '" + line + "'");
                    continue;
                }
                section = trim(line.substr(1, line.size() - 2));
                sections_[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                error(lineno, "expected 'key = value', got '" + line + "'");
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) {
                error(lineno, "empty key");
                continue;
            }
            auto& sec = sections_[section];
            if (sec.count(key)) {
                error(lineno, "duplicate key '" + key + "'");
                continue;
            }
            sec[key] = Entry{value, lineno};
        }
    }

    void error(int line, const std::string& msg) {
        std::ostringstream os;
        os << origin_ << ":" << line << ": " << msg;
        errors_.push_back(os.str());
    }
    void error(const std::string& msg) { errors_.push_back(origin_ + ": " + msg); }

    bool has(const std::string& section, const std::string& key) {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key);
    }

    std::optional<std::string> get(const std::string& section, const std::string& key) {
        auto s = sections_.find(section);
        if (s == sections_.end()) return std::nullopt;
        auto it = s->second.find(key);
        if (it == s->second.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::optional<double> get_double(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        if (!v) return std::nullopt;
        char* end = nullptr;
        const double x = std::strtod(v->c_str(), &end);
        if (end == v->c_str() || *end != '\0') {
            error(line_of(section, key), "key '" + key + "': not a number: '" + *v + "'");
            return std::nullopt;
        }
        return x;
    }

    std::optional<long long> get_int(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        if (!v) return std::nullopt;
        char* end = nullptr;
        const long long x = std::strtoll(v->c_str(), &end, 10);
        if (end == v->c_str() || *end != '\0') {
            error(line_of(section, key), "key '" + key + "': not an integer: '" + *v + "'");
            return std::nullopt;
        }
        return x;
    }

    std::optional<bool> get_bool(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        if (!v) return std::nullopt;
        if (*v == "true") return true;
        if (*v == "false") return false;
        error(line_of(section, key), "key '" + key + "': expected true/false, got '" + *v + "'");
        return std::nullopt;
    }

    int line_of(const std::string& section, const std::string& key) {
        auto s = sections_.find(section);
        if (s == sections_.end()) return 0;
        auto it = s->second.find(key);
        return it == s->second.end() ? 0 : it->second.line;
    }

    // after consuming: reject unknown sections/keys with suggestions
    void finish(const std::map<std::string, std::vector<std::string>>& known) {
        std::vector<std::string> known_sections;
        for (const auto& [sec, _] : known) known_sections.push_back(sec);
        for (const auto& [sec, entries] : sections_) {
            auto k = known.find(sec);
            if (k == known.end()) {
                error("unknown section '[" + sec + "]'" + suggest(sec, known_sections));
                continue;
            }
            for (const auto& [key, entry] : entries) {
                if (!entry.used)
                    error(entry.line, "unknown key '" + key + "'" + suggest(key, k->second));
            }
        }
    }

    void throw_if_errors() const {
        if (errors_.empty()) return;
        std::ostringstream os;
        os << errors_.size() << " scenario validation error(s):";
        for (const auto& e : errors_) os << "\n  " << e;
        throw ValidationError(os.str());
    }

    bool ok() const { return errors_.empty(); }

private:
    std::string origin_;
    SectionMap sections_;
    std::vector<std::string> errors_;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

std::optional<std::vector<double>> parse_axis_values(const std::string& spec, std::string* err) {
    auto parse_num = [](const std::string& s, double& out) {
        char* end = nullptr;
        out = std::strtod(s.c_str(), &end);
        return end != s.c_str() && *end == '\0';
    };
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string mode = spec.substr(0, colon);
        const auto parts = split_list([&] {
            std::string rest = spec.substr(colon + 1);
            std::replace(rest.begin(), rest.end(), ':', ',');
            return rest;
        }());
        if ((mode == "logspace" || mode == "linspace") && parts.size() == 3) {
            double a, b;
            double kd;
            if (!parse_num(parts[0], a) || !parse_num(parts[1], b) || !parse_num(parts[2], kd)) {
                *err = "malformed axis spec '" + spec + "'";
                return std::nullopt;
            }
            const int k = static_cast<int>(kd);
            if (k < 2 || std::abs(kd - k) > 0) {
                *err = "axis spec '" + spec + "': count must be an integer >= 2";
                return std::nullopt;
            }
            std::vector<double> vals(k);
            if (mode == "logspace") {
                if (!(a > 0.0) || !(b > 0.0)) {
                    *err = "logspace bounds must be positive";
                    return std::nullopt;
                }
                const double la = std::log10(a), lb = std::log10(b);
                for (int i = 0; i < k; ++i)
                    vals[i] = std::pow(10.0, la + (lb - la) * i / (k - 1));
            } else {
                for (int i = 0; i < k; ++i) vals[i] = a + (b - a) * i / (k - 1);
            }
            return vals;
        }
        *err = "unknown axis spec '" + spec + "' (use logspace:a:b:k, linspace:a:b:k or a list)";
        return std::nullopt;
    }
    std::vector<double> vals;
    for (const auto& tok : split_list(spec)) {
        double v;
        if (!parse_num(tok, v)) {
            *err = "axis list value '" + tok + "' is not a number";
            return std::nullopt;
        }
        vals.push_back(v);
    }
    if (vals.empty()) {
        *err = "empty axis list";
        return std::nullopt;
    }
    return vals;
}

const std::vector<std::string> kLindbladObs = {"Q", "P", "Q2", "QP", "P2", "K",
                                               "purity", "S_l", "S_s"};
const std::vector<std::string> kOracleObs = {"Q", "P", "Q2", "QP", "P2", "K"};

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    Parser p(text, origin);
    Scenario s;

    if (auto v = p.get("", "name")) s.name = *v;
    else p.error("missing required top-level key 'name'");

    if (auto v = p.get("", "engine")) {
        const std::string& e = *v;
        if (e == "lindblad") s.engine = EngineKind::lindblad;
        else if (e == "ito") s.engine = EngineKind::ito;
        else if (e == "grid") s.engine = EngineKind::grid;
        else if (e == "oracles") s.engine = EngineKind::oracles;
        else if (e == "grwp") s.engine = EngineKind::grwp;
        else if (e == "integral") s.engine = EngineKind::integral;
        else if (e == "crossval") s.engine = EngineKind::crossval;
        else
            p.error(p.line_of("", "engine"),
                    "unknown engine '" + e +
                        "'" + suggest(e, {"lindblad", "ito", "grid", "oracles", "grwp",
                                          "integral", "crossval"}));
    } else {
        p.error("missing required top-level key 'engine'");
    }

    // [units] is mandatory: silent unit bugs are the dominant risk here.
    if (auto v = p.get("units", "system")) {
        if (*v == "engine") s.units = UnitKind::DimensionlessEngine;
        else if (*v == "cgs") s.units = UnitKind::CGS;
        else p.error(p.line_of("units", "system"), "units.system must be 'engine' or 'cgs'");
    } else if (s.engine != EngineKind::crossval) {
        p.error("missing mandatory [units] section with key 'system'");
    }

    s.params.kind = s.units;
    const bool needs_params = s.engine != EngineKind::crossval && s.engine != EngineKind::grwp;
    if (auto v = p.get("params", "N")) {
        char* end = nullptr;
        s.params.N = std::strtod(v->c_str(), &end);
        if (end == v->c_str() || *end != '\0')
            p.error(p.line_of("params", "N"), "params.N: not a number");
    } else if (needs_params) {
        p.error("missing required key params.N");
    }
    if (auto v = p.get_double("params", "Lambda")) s.params.Lambda = *v;
    else if (needs_params) p.error("missing required key params.Lambda");
    if (auto v = p.get_double("params", "m")) s.params.m = *v;
    else if (needs_params && s.units == UnitKind::CGS) p.error("missing required key params.m (CGS)");
    if (auto v = p.get_double("params", "omega")) s.params.omega = *v;
    else if (needs_params && s.units == UnitKind::CGS)
        p.error("missing required key params.omega (CGS)");
    if (auto v = p.get_double("params", "M")) s.params.M = *v;
    else s.params.M = s.params.N * s.params.m;
    if (auto v = p.get_double("params", "tau_c")) s.params.tau_c = *v;
    if (auto v = p.get_int("params", "dims")) s.params.dims = static_cast<int>(*v);

    const bool has_T = p.has("params", "T");
    const bool has_nbar = p.has("params", "nbar");
    if (has_T && has_nbar) p.error("params.T and params.nbar are mutually exclusive");
    if (auto v = p.get_double("params", "T")) s.params.T = *v;
    if (auto v = p.get_double("params", "nbar")) {
        if (*v < 0.0) p.error(p.line_of("params", "nbar"), "params.nbar must be >= 0");
        else s.nbar_override = *v;
    }
    if (needs_params && !has_T && !has_nbar)
        p.error("missing thermal input: set params.T or params.nbar explicitly");

    if (auto v = p.get("initial", "kind")) {
        if (*v == "coherent" || *v == "thermal" || *v == "cat") s.initial.kind = *v;
        else
            p.error(p.line_of("initial", "kind"),
                    "initial.kind must be coherent|thermal|cat" +
                        suggest(*v, {"coherent", "thermal", "cat"}));
    }
    double are = 0.0, aim = 0.0;
    if (auto v = p.get_double("initial", "alpha_re")) are = *v;
    if (auto v = p.get_double("initial", "alpha_im")) aim = *v;
    s.initial.alpha = {are, aim};
    if (auto v = p.get_double("initial", "nbar")) s.initial.nbar = *v;
    if (auto v = p.get_double("initial", "separation")) s.initial.separation = *v;

    if (auto v = p.get_int("run", "d")) s.run.d = static_cast<int>(*v);
    if (auto v = p.get_double("run", "t_max")) s.run.t_max = *v;
    if (auto v = p.get_int("run", "n_outputs")) s.run.n_outputs = static_cast<int>(*v);
    if (auto v = p.get_double("run", "dt")) s.run.dt = *v;
    if (auto v = p.get_int("run", "seed")) s.run.seed = static_cast<std::uint64_t>(*v);
    if (auto v = p.get_int("run", "n_traj")) s.run.n_traj = static_cast<int>(*v);

    if (auto v = p.get_double("grid", "L")) s.grid.L = *v;
    if (auto v = p.get_int("grid", "n")) s.grid.n = static_cast<int>(*v);
    if (auto v = p.get_double("grid", "sigma")) s.grid.sigma = *v;
    if (auto v = p.get_double("grid", "fit_window")) s.grid.fit_window = *v;

    if (auto v = p.get("oracle", "task")) {
        if (*v == "moments" || *v == "lambda_estimate" || *v == "decoherence_time")
            s.oracle.task = *v;
        else
            p.error(p.line_of("oracle", "task"),
                    "oracle.task must be moments|lambda_estimate|decoherence_time" +
                        suggest(*v, {"moments", "lambda_estimate", "decoherence_time"}));
    }
    if (auto v = p.get_double("oracle", "tau_R")) s.oracle.tau_R = *v;
    if (auto v = p.get_double("oracle", "K_s")) s.oracle.K_s = *v;
    if (auto v = p.get_double("oracle", "K_eq")) s.oracle.K_eq = *v;
    if (auto v = p.get_double("oracle", "deltaQ")) s.oracle.deltaQ = *v;
    if (auto v = p.get("oracle", "regime")) {
        if (*v == "general" || *v == "low_frequency") s.oracle.regime = *v;
        else
            p.error(p.line_of("oracle", "regime"),
                    "oracle.regime must be general|low_frequency" +
                        suggest(*v, {"general", "low_frequency"}));
    }
    if (auto v = p.get_bool("oracle", "grwp_comparison")) s.oracle.grwp_comparison = *v;

    if (auto v = p.get_double("grwp", "alpha")) s.grwp.alpha = *v;
    if (auto v = p.get_double("grwp", "zeta")) s.grwp.zeta = *v;
    if (auto v = p.get_double("grwp", "D0")) s.grwp.D0 = *v;
    if (auto v = p.get_double("grwp", "S_i")) s.grwp.S_i = *v;
    if (auto v = p.get_double("grwp", "n")) s.grwp.n = *v;
    if (auto v = p.get_double("grwp", "M")) s.grwp.M = *v;
    if (auto v = p.get_double("grwp", "t_max")) s.grwp.t_max = *v;
    if (auto v = p.get_int("grwp", "n_outputs")) s.grwp.n_outputs = static_cast<int>(*v);

    if (auto v = p.get("sweep", "axes")) {
        for (const auto& axis : split_list(*v)) {
            if (axis != "T" && axis != "N" && axis != "Lambda" && axis != "deltaQ" &&
                axis != "p" && axis != "xi") {
                p.error(p.line_of("sweep", "axes"),
                        "sweep axis '" + axis + "' not supported (T, N, Lambda, deltaQ, p, xi)");
                continue;
            }
            if (auto spec = p.get("sweep", axis)) {
                std::string err;
                if (auto vals = parse_axis_values(*spec, &err))
                    s.sweep.push_back({axis, *vals});
                else
                    p.error(p.line_of("sweep", axis), err);
            } else {
                p.error("sweep axis '" + axis + "' listed but has no value spec");
            }
        }
        std::size_t total = 1;
        for (const auto& ax : s.sweep) total *= ax.values.size();
        if (total > 10000) p.error("sweep size exceeds the 1e4-point bound");
    }

    if (auto v = p.get("crossval", "pair")) {
        s.crossval_pair = split_list(*v);
        if (s.crossval_pair.size() != 2) p.error("crossval.pair must name exactly two scenarios");
    } else if (s.engine == EngineKind::crossval) {
        p.error("engine=crossval requires [crossval] pair = <a>,<b>");
    }

    if (auto v = p.get("outputs", "observables")) {
        s.observables = split_list(*v);
        const auto& known =
            (s.engine == EngineKind::oracles) ? kOracleObs : kLindbladObs;
        if (s.engine == EngineKind::lindblad || s.engine == EngineKind::ito ||
            s.engine == EngineKind::oracles) {
            for (const auto& o : s.observables)
                if (std::find(known.begin(), known.end(), o) == known.end())
                    p.error(p.line_of("outputs", "observables"),
                            "observable '" + o + "' not available for engine " +
                                engine_name(s.engine) + suggest(o, known));
        } else {
            p.error("outputs.observables is only meaningful for lindblad/ito/oracles");
        }
    } else if (s.engine == EngineKind::lindblad || s.engine == EngineKind::ito) {
        s.observables = kLindbladObs;
    } else if (s.engine == EngineKind::oracles) {
        s.observables = kOracleObs;
    }

    static const std::map<std::string, std::vector<std::string>> known = {
        {"", {"name", "engine"}},
        {"units", {"system"}},
        {"params", {"N", "m", "M", "omega", "Lambda", "tau_c", "T", "nbar", "dims"}},
        {"initial", {"kind", "alpha_re", "alpha_im", "nbar", "separation"}},
        {"run", {"d", "t_max", "n_outputs", "dt", "seed", "n_traj"}},
        {"grid", {"L", "n", "sigma", "fit_window"}},
        {"oracle", {"task", "tau_R", "K_s", "K_eq", "deltaQ", "regime", "grwp_comparison"}},
        {"grwp", {"alpha", "zeta", "D0", "S_i", "n", "M", "t_max", "n_outputs"}},
        {"sweep", {"axes", "T", "N", "Lambda", "deltaQ", "p", "xi"}},
        {"crossval", {"pair"}},
        {"outputs", {"observables"}},
    };
    p.finish(known);

    // physics-level validation only when the keys parsed
    if (p.ok() && needs_params) {
        try {
            s.params.validate();
        } catch (const ValidationError& e) {
            p.error(e.what());
        }
    }
    if (s.run.n_outputs < 2 && s.engine != EngineKind::oracles) {
        if (s.engine == EngineKind::lindblad || s.engine == EngineKind::ito ||
            s.engine == EngineKind::grid)
            p.error("run.n_outputs must be >= 2");
    }
    p.throw_if_errors();
    return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str(), path.filename().string());
}

Scenario load_scenario_ref(const std::string& ref) {
    if (is_builtin_ref(ref)) return parse_scenario_text(builtin_scenario_text(ref.substr(8)), ref);
    return parse_scenario(ref);
}

bool is_builtin_ref(const std::string& ref) { return ref.rfind("builtin:", 0) == 0; }

ModelParams Scenario::engine_params() const {
    ModelParams p = params;
    if (nbar_override) {
        if (units == UnitKind::CGS)
            throw ValidationError("nbar override requires engine units");
        p.T = *nbar_override > 0.0 ? 1.0 / std::log1p(1.0 / *nbar_override) : 0.0;
    }
    if (units == UnitKind::CGS) return to_engine_units(p, engine_unit_system(p));
    p.validate();
    return p;
}

double Scenario::occupation() const {
    if (nbar_override) return *nbar_override;
    return params.occupation();
}

std::string Scenario::canonical_text() const {
    std::ostringstream os;
    auto d = [](double v) { return CsvTable::format_double(v); };
    os << "name = " << name << "\n";
    os << "engine = " << engine_name(engine) << "\n\n";
    os << "[units]\nsystem = " << (units == UnitKind::CGS ? "cgs" : "engine") << "\n\n";
    os << "[params]\n";
    os << "N = " << d(params.N) << "\nm = " << d(params.m) << "\nM = " << d(params.M)
       << "\nomega = " << d(params.omega) << "\nLambda = " << d(params.Lambda)
       << "\ntau_c = " << d(params.tau_c) << "\n";
    if (nbar_override) os << "nbar = " << d(*nbar_override) << "\n";
    else os << "T = " << d(params.T) << "\n";
    os << "dims = " << params.dims << "\n\n";
    os << "[initial]\nkind = " << initial.kind << "\nalpha_re = " << d(initial.alpha.real())
       << "\nalpha_im = " << d(initial.alpha.imag()) << "\nnbar = " << d(initial.nbar)
       << "\nseparation = " << d(initial.separation) << "\n\n";
    os << "[run]\nd = " << run.d << "\nt_max = " << d(run.t_max)
       << "\nn_outputs = " << run.n_outputs << "\ndt = " << d(run.dt) << "\nseed = " << run.seed
       << "\nn_traj = " << run.n_traj << "\n\n";
    os << "[grid]\nL = " << d(grid.L) << "\nn = " << grid.n << "\nsigma = " << d(grid.sigma)
       << "\nfit_window = " << d(grid.fit_window) << "\n\n";
    os << "[oracle]\ntask = " << oracle.task << "\ntau_R = " << d(oracle.tau_R)
       << "\nK_s = " << d(oracle.K_s) << "\nK_eq = " << d(oracle.K_eq)
       << "\ndeltaQ = " << d(oracle.deltaQ) << "\nregime = " << oracle.regime
       << "\ngrwp_comparison = " << (oracle.grwp_comparison ? "true" : "false") << "\n\n";
    os << "[grwp]\nalpha = " << d(grwp.alpha) << "\nzeta = " << d(grwp.zeta)
       << "\nD0 = " << d(grwp.D0) << "\nS_i = " << d(grwp.S_i) << "\nn = " << d(grwp.n)
       << "\nM = " << d(grwp.M) << "\nt_max = " << d(grwp.t_max)
       << "\nn_outputs = " << grwp.n_outputs << "\n";
    if (!sweep.empty()) {
        os << "\n[sweep]\naxes = ";
        for (std::size_t i = 0; i < sweep.size(); ++i) os << (i ? "," : "") << sweep[i].name;
        os << "\n";
        for (const auto& ax : sweep) {
            os << ax.name << " = ";
            for (std::size_t i = 0; i < ax.values.size(); ++i)
                os << (i ? "," : "") << d(ax.values[i]);
            os << "\n";
        }
    }
    if (!crossval_pair.empty()) {
        os << "\n[crossval]\npair = " << crossval_pair[0] << "," << crossval_pair[1] << "\n";
    }
    if (!observables.empty()) {
        os << "\n[outputs]\nobservables = ";
        for (std::size_t i = 0; i < observables.size(); ++i)
            os << (i ? "," : "") << observables[i];
        os << "\n";
    }
    return os.str();
}

void ResultBundle::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        if (!out) throw ValidationError("cannot write manifest to " + dir.string());
        out << manifest_json;
    }
    for (const auto& [name, text] : tables) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw ValidationError("cannot write table " + name);
        out << text;
    }
}

}  // namespace cbr
