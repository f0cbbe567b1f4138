#include "invsrc/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "invsrc/io.hpp"
#include "invsrc/parallel.hpp"
#include "invsrc/phase_retrieval.hpp"

namespace invsrc {

namespace {

namespace fs = std::filesystem;

// --out flag beats the INVSRC_OUT_DIR environment variable, which beats the
// config's own out key; the fallback is out/<name> under the working
// directory.
fs::path resolve_out_dir(const ScenarioConfig& config, const RunOverrides& overrides) {
    if (overrides.out_dir && !overrides.out_dir->empty()) return *overrides.out_dir;
    if (const char* env = std::getenv("INVSRC_OUT_DIR"); env != nullptr && *env != '\0')
        return env;
    if (!config.out_dir.empty()) return config.out_dir;
    return fs::path("out") / config.name;
}

Dataset add_noise(Dataset ds, const NoiseSpec& noise, uint64_t seed) {
    switch (noise.kind) {
        case NoiseSpec::Kind::None: return ds;
        case NoiseSpec::Kind::Relative: return apply_relative_noise(ds, noise.level, seed);
        case NoiseSpec::Kind::Absolute: return apply_absolute_noise(ds, noise.level, seed);
    }
    return ds;
}

class ArtifactWriter {
public:
    ArtifactWriter(fs::path out_dir) : out_dir_(std::move(out_dir)) {}

    template <typename Fn>
    void add(const std::string& name, Fn&& write_fn) {
        const fs::path full = out_dir_ / name;
        write_fn(full);
        artifacts_.push_back({name, sha256_file_hex(full)});
    }

    std::vector<Artifact> take() { return std::move(artifacts_); }

private:
    fs::path out_dir_;
    std::vector<Artifact> artifacts_;
};

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const RunOverrides& overrides) {
    const auto t_start = std::chrono::steady_clock::now();

    const uint64_t seed = overrides.seed.value_or(config.noise.seed);
    const int threads = overrides.threads > 0 ? overrides.threads : default_thread_count();

    const SourceModel model(config.components, config.g);
    const WaveNumberGrid grid = config.wavenumbers();
    const std::vector<Direction> directions = config.directions();

    const fs::path out_dir = resolve_out_dir(config, overrides);
    fs::create_directories(out_dir);
    ArtifactWriter writer(out_dir);

    // One dataset per reference point; dataset m draws its noise from
    // seed + m so multi-reference runs stay reproducible record by record.
    std::vector<Dataset> datasets;
    datasets.reserve(config.z0s.size());
    for (std::size_t m = 0; m < config.z0s.size(); ++m) {
        Dataset ds = synthesize(model, config.z0s[m], config.taus, directions, grid, threads);
        ds = add_noise(std::move(ds), config.noise, seed + m);
        datasets.push_back(std::move(ds));
    }
    const bool multi = datasets.size() > 1;
    auto indexed = [&](const std::string& stem, std::size_t m, const char* ext) {
        return multi ? stem + "_" + std::to_string(m + 1) + ext : stem + ext;
    };

    const bool writes_datasets = config.mode == Mode::Forward || config.mode == Mode::Retrieve ||
                                 config.mode == Mode::FullSchemeOne ||
                                 config.mode == Mode::FullSchemeTwo;
    if (writes_datasets) {
        for (std::size_t m = 0; m < datasets.size(); ++m)
            writer.add(indexed("phaseless", m, ".csv"), [&](const fs::path& p) {
                write_phaseless_csv(p, datasets[m]);
            });
        // The source-only far field does not depend on the reference point,
        // so one truth file covers every dataset.
        writer.add("phased_truth.csv", [&](const fs::path& p) {
            write_phased_csv(p, datasets.front().truth_records());
        });
    }

    auto write_field = [&](const IndicatorField& field, const std::string& stem) {
        writer.add(stem + ".csv", [&](const fs::path& p) { write_field_csv(p, field); });
        writer.add(stem + ".pgm", [&](const fs::path& p) { write_field_pgm(p, field); });
    };

    switch (config.mode) {
        case Mode::Forward:
            break;

        case Mode::Retrieve:
        case Mode::FullSchemeTwo: {
            const std::vector<FarFieldRecord> recovered = retrieve_far_field(datasets.front());
            writer.add("phased_retrieved.csv", [&](const fs::path& p) {
                write_phased_csv(p, recovered, std::string("retrieved"));
            });
            if (config.mode == Mode::FullSchemeTwo) {
                IndicatorI2 i2(PhasedTable::from_records(recovered));
                write_field(evaluate_on_grid(i2, config.sampling_grid(), "i2", threads), "i2");
            }
            break;
        }

        case Mode::SampleI1:
        case Mode::FullSchemeOne: {
            const SamplingGrid sgrid = config.sampling_grid();
            std::vector<IndicatorField> fields;
            fields.reserve(datasets.size());
            for (std::size_t m = 0; m < datasets.size(); ++m) {
                IndicatorI1 i1(datasets[m]);
                std::string stem = multi ? "i1_" + std::to_string(m + 1) : "i1";
                fields.push_back(evaluate_on_grid(i1, sgrid, stem, threads));
                write_field(fields.back(), stem);
            }
            if (multi)
                write_field(combine_min_normalized(fields, "i1_combined"), "i1_combined");
            break;
        }

        case Mode::SampleI2: {
            IndicatorI2 i2(PhasedTable::from_truth(datasets.front()));
            write_field(evaluate_on_grid(i2, config.sampling_grid(), "i2", threads), "i2");
            break;
        }
    }

    RunResult result;
    result.out_dir = out_dir;
    result.artifacts = writer.take();

    // The hash covers the scenario as executed: the effective seed is folded
    // in, the output location is not (the same run written elsewhere hashes
    // the same).
    ScenarioConfig effective = config;
    effective.noise.seed = seed;
    const std::string config_hash = sha256_hex(serialize_config(effective));

    const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t_start)
                             .count();

    nlohmann::json manifest;
    manifest["config_sha256"] = config_hash;
    manifest["seed"] = seed;
    manifest["artifacts"] = nlohmann::json::array();
    for (const Artifact& a : result.artifacts)
        manifest["artifacts"].push_back({{"path", a.path}, {"sha256", a.sha256}});
    manifest["wall_time_ms"] = wall_ms;

    const fs::path manifest_path = out_dir / "manifest.json";
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf) throw std::runtime_error("cannot write " + manifest_path.string());
    mf << manifest.dump(2) << '\n';
    mf.close();
    result.manifest_path = manifest_path.string();
    return result;
}

}  // namespace invsrc
