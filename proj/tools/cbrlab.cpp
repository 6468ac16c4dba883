// Batch front-end: parse scenario files, dispatch engines, emit CSV/JSON.
//
//   cbrlab run <scenario-file|builtin:NAME> [--out DIR] [--seed U64] [--threads K]
//   cbrlab validate <scenario-file|builtin:NAME>
//   cbrlab list-builtin
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cbrlab/errors.hpp"
#include "cbrlab/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cbrlab - CBR decoherence numerical laboratory"};
    app.require_subcommand(1);

    std::string ref;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0;

    auto* run = app.add_subcommand("run", "run a scenario and write its result bundle");
    run->add_option("scenario", ref, "scenario file path or builtin:<name>")->required();
    run->add_option("--out", out_dir, "output directory (default: out-<scenario-name>)");
    std::uint64_t seed_raw = 0;
    auto* seed_opt = run->add_option("--seed", seed_raw, "override the scenario seed");
    run->add_option("--threads", threads, "worker threads (0 = hardware)");

    auto* validate = app.add_subcommand("validate", "parse and validate a scenario");
    validate->add_option("scenario", ref, "scenario file path or builtin:<name>")->required();

    auto* list = app.add_subcommand("list-builtin", "list built-in scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& [name, desc] : cbr::list_builtin())
                std::cout << name << "  -  " << desc << "\n";
            return 0;
        }
        if (validate->parsed()) {
            const cbr::Scenario s = cbr::load_scenario_ref(ref);
            std::cout << "scenario '" << s.name << "' (engine " << cbr::engine_name(s.engine)
                      << ") is valid\n";
            return 0;
        }
        if (run->parsed()) {
            if (*seed_opt) seed = seed_raw;
            const cbr::Scenario s = cbr::load_scenario_ref(ref);
            const cbr::ResultBundle bundle = cbr::run_scenario(s, seed, threads);
            const std::filesystem::path dir =
                out_dir.empty() ? std::filesystem::path("out-" + s.name)
                                : std::filesystem::path(out_dir);
            bundle.write(dir);
            std::cout << "wrote " << bundle.tables.size() << " table(s) + manifest to " << dir
                      << "\n";
            if (bundle.manifest_json.find("\"crossval_pass\": false") != std::string::npos) {
                std::cerr << "cross-validation FAILED (see report.csv)\n";
                return 3;
            }
            return 0;
        }
    } catch (const cbr::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const cbr::RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 3;
    } catch (const cbr::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what()
                  << " (best estimate " << e.best_estimate << ", bound " << e.error_bound
                  << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
