#pragma once

#include <optional>
#include <string>
#include <vector>

#include "invsrc/forward.hpp"
#include "invsrc/sampling.hpp"
#include "invsrc/scene.hpp"

namespace invsrc {

enum class Mode {
    Forward,       // synthesize (+ optional noise), write dataset CSVs
    Retrieve,      // ... + phase retrieval, write recovered phased CSV
    SampleI1,      // phaseless indicator field(s) only
    SampleI2,      // phased indicator field from the true far field
    FullSchemeOne, // dataset CSVs + phaseless indicator field(s)
    FullSchemeTwo, // dataset CSVs + retrieval + phased indicator field
};

const char* mode_name(Mode m);
std::optional<Mode> mode_from_name(const std::string& name);

struct SamplingSpec {
    double x_lo, x_hi, y_lo, y_hi;
    int nx, ny;
};

// Validated scenario description.  Parsed from the line-oriented key/value
// format documented in the README (sections [scenario], [source],
// [reference], [wavenumbers], [directions], [noise], [sampling]).
struct ScenarioConfig {
    std::string name;
    Mode mode = Mode::Forward;
    std::string out_dir;  // empty: resolved to out/<name> at run time

    std::vector<SourceComponent> components;
    Expression g = Expression::literal(1.0);

    double k_min = 0.0, k_max = 0.0;
    int k_count = 0;

    std::vector<double> angles;  // resolved direction angles, radians

    std::vector<Point2> z0s;
    std::vector<Complex> taus;

    NoiseSpec noise;

    std::optional<SamplingSpec> sampling;

    WaveNumberGrid wavenumbers() const { return WaveNumberGrid(k_min, k_max, k_count); }
    std::vector<Direction> directions() const;
    SamplingGrid sampling_grid() const;
};

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

struct ConfigParseResult {
    std::optional<ScenarioConfig> config;
    std::vector<std::string> errors;  // "line N: message" for syntax issues
    bool ok() const { return config.has_value() && errors.empty(); }
};

// Parses and validates; never throws.  On failure, `errors` lists every
// problem found (syntax errors carry line numbers, semantic errors the
// offending key).
ConfigParseResult parse_config(const std::string& text);
ConfigParseResult parse_config_file(const std::string& path);

// Canonical text form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ScenarioConfig& config);

}  // namespace invsrc
