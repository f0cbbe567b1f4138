#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "invsrc/config.hpp"

namespace invsrc {

struct RunOverrides {
    std::optional<uint64_t> seed;
    std::optional<std::string> out_dir;
    int threads = 0;  // 0: hardware concurrency
};

struct Artifact {
    std::string path;  // relative to the output directory
    std::string sha256;
};

struct RunResult {
    std::filesystem::path out_dir;
    std::vector<Artifact> artifacts;  // excludes the manifest itself
    std::string manifest_path;
};

// Executes a validated scenario: synthesizes data, applies noise, runs the
// mode's pipeline, writes artifacts plus manifest.json into the output
// directory.  Identical (config, seed) produce byte-identical artifacts.
// Throws std::invalid_argument for semantic config problems and
// runtime_error subclasses (quadrature_error, dataset_error, ...) for
// numerical failures.
RunResult run_scenario(const ScenarioConfig& config, const RunOverrides& overrides = {});

}  // namespace invsrc
