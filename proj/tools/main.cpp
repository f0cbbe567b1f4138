// invsource: scenario runner for phaseless source reconstruction.
//
//   invsource run <config> [--seed S] [--out DIR] [--threads T]
//   invsource validate <config>
//
// Exit codes: 0 success, 2 config problem, 3 numerical failure.
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "invsrc/config.hpp"
#include "invsrc/errors.hpp"
#include "invsrc/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int load_config(const std::string& path, invsrc::ScenarioConfig& out) {
    invsrc::ConfigParseResult parsed = invsrc::parse_config_file(path);
    if (!parsed.ok()) {
        std::cerr << path << ": invalid config\n";
        for (const std::string& e : parsed.errors) std::cerr << "  " << e << "\n";
        return kExitConfig;
    }
    out = std::move(*parsed.config);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-frequency phaseless source reconstruction"};
    app.require_subcommand(1);

    std::string config_path;
    invsrc::RunOverrides overrides;
    std::uint64_t seed_arg = 0;
    std::string out_arg;

    CLI::App* run = app.add_subcommand("run", "Execute a scenario config");
    run->add_option("config", config_path, "Scenario config file")->required();
    CLI::Option* seed_opt = run->add_option("--seed", seed_arg, "Override the noise seed");
    CLI::Option* out_opt = run->add_option("--out", out_arg, "Output directory");
    run->add_option("--threads", overrides.threads, "Worker thread count (0 = auto)")
        ->check(CLI::NonNegativeNumber);

    CLI::App* validate = app.add_subcommand("validate", "Parse and validate a config");
    validate->add_option("config", config_path, "Scenario config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    invsrc::ScenarioConfig config;
    if (int rc = load_config(config_path, config); rc != 0) return rc;

    if (validate->parsed()) {
        std::cout << config_path << ": ok (" << invsrc::mode_name(config.mode) << ", "
                  << config.angles.size() << " directions, " << config.k_count
                  << " wavenumbers)\n";
        return 0;
    }

    if (*seed_opt) overrides.seed = seed_arg;
    if (*out_opt) overrides.out_dir = out_arg;

    try {
        invsrc::RunResult result = invsrc::run_scenario(config, overrides);
        std::cout << result.out_dir.string() << ": " << result.artifacts.size()
                  << " artifacts\n";
        for (const invsrc::Artifact& a : result.artifacts)
            std::cout << "  " << a.path << "  " << a.sha256.substr(0, 12) << "\n";
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
