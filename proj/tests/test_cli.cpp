#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "invsrc/config.hpp"
#include "invsrc/io.hpp"
#include "invsrc/runner.hpp"

using namespace invsrc;
namespace fs = std::filesystem;

namespace {

fs::path source_dir() {
    const char* env = std::getenv("INVSRC_SOURCE_DIR");
    return env != nullptr && *env != '\0' ? fs::path(env) : fs::current_path();
}

fs::path scratch_root() {
    static const fs::path root =
        fs::temp_directory_path() / ("invsrc_cli_test_" + std::to_string(getpid()));
    return root;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = scratch_root() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

bool has_error_containing(const ConfigParseResult& r, const std::string& needle) {
    for (const std::string& e : r.errors)
        if (e.find(needle) != std::string::npos) return true;
    return false;
}

// A complete, fast scenario; sections can be overridden piecewise.
std::string tiny_config(const std::string& mode, const std::string& reference,
                        bool with_sampling = true, const std::string& noise = "kind = none\n") {
    std::string text;
    text += "[scenario]\nname = tiny\nmode = " + mode + "\n";
    text += "[source]\ng = 1\nshape = rect 1 2 1 1.6\nf = 5\n";
    text += "[wavenumbers]\nk_min = 0.5\nk_max = 4\ncount = 4\n";
    text += "[directions]\nangles = 0 1.1\n";
    text += "[reference]\n" + reference;
    text += "[noise]\n" + noise;
    if (with_sampling)
        text += "[sampling]\nx_lo = -2\nx_hi = 4\ny_lo = -2\ny_hi = 4\nnx = 12\nny = 12\n";
    return text;
}

const std::string kRefPair = "z0 = 4 4\ntau = 0\ntau = 1\n";
const std::string kRefTriple = "z0 = 4 4\ntau = 1\ntau = -1\ntau = 0 1\n";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(INVSRC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config: bundled fixtures all parse and validate") {
    const fs::path dir = source_dir() / "fixtures";
    REQUIRE(fs::is_directory(dir));
    std::size_t count = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".cfg") continue;
        ++count;
        const ConfigParseResult r = parse_config_file(entry.path().string());
        INFO(entry.path().filename().string());
        for (const std::string& e : r.errors) { INFO(e); }
        CHECK(r.ok());
    }
    CHECK(count >= 14);
}

TEST_CASE("config: the single-direction phased scenario carries its parameters") {
    const ConfigParseResult r =
        parse_config_file((source_dir() / "fixtures/rect_phased_one_direction.cfg").string());
    REQUIRE(r.ok());
    const ScenarioConfig& c = *r.config;
    CHECK(c.mode == Mode::FullSchemeTwo);
    CHECK(c.k_min == 0.5);
    CHECK(c.k_max == 20.0);
    CHECK(c.k_count == 20);
    CHECK(c.angles == std::vector<double>{0.0});
    REQUIRE(c.z0s.size() == 1);
    CHECK(c.z0s[0] == Point2{4, 4});
    CHECK(c.taus == std::vector<Complex>{{1, 0}, {-1, 0}, {0, 1}});
    REQUIRE(c.components.size() == 1);
    CHECK(c.g.text() == "1");
    REQUIRE(c.sampling.has_value());
    CHECK(c.sampling->nx == 200);
}

TEST_CASE("config: comments, blank lines, CRLF and arc expansion") {
    const std::string text =
        "# leading comment\r\n"
        "[scenario]\r\n"
        "name = crlf\n"
        "mode = forward\n"
        "\n"
        "[source]\n"
        "g = k\n"
        "shape = disc 0 0 1\n"
        "f = x + y\n"
        "[wavenumbers]\n"
        "k_min = 0.5\nk_max = 20\ncount = 20\n"
        "[directions]\n"
        "arc = 0 3.2 4\n"
        "[reference]\n"
        "z0 = 5 5\ntau = 1\n";
    const ConfigParseResult r = parse_config(text);
    REQUIRE(r.ok());
    CHECK(r.config->angles == std::vector<double>{0.8, 1.6, 2.4000000000000004, 3.2});
}

TEST_CASE("config: syntax errors carry line numbers") {
    const std::string base = "[scenario]\nname = x\nmode = forward\n";
    CHECK(has_error_containing(parse_config("junk = 1\n"), "line 1"));
    CHECK(has_error_containing(parse_config("junk = 1\n"), "before any"));
    CHECK(has_error_containing(parse_config(base + "bogus = 1\n"), "line 4"));
    CHECK(has_error_containing(parse_config(base + "bogus = 1\n"), "unknown key 'bogus'"));
    CHECK(has_error_containing(parse_config("[mystery]\n"), "unknown section"));
    CHECK(has_error_containing(parse_config("[scenario\n"), "unterminated"));
    CHECK(has_error_containing(parse_config(base + "no equals sign\n"), "expected key = value"));
    CHECK(has_error_containing(parse_config("[wavenumbers]\nk_min = abc\n"), "expected a number"));
    CHECK(has_error_containing(parse_config("[wavenumbers]\ncount = 2.5\n"),
                               "expected an integer"));
    CHECK(has_error_containing(parse_config("[source]\nf = 5\n"), "without a preceding shape"));
    CHECK(has_error_containing(parse_config("[source]\nshape = rect 0 1 0 1\n"),
                               "missing its f"));
    CHECK(has_error_containing(parse_config("[source]\nshape = rect 0 1 0\nf = 1\n"),
                               "missing rect"));
    CHECK(has_error_containing(parse_config("[source]\nshape = rect 0 1 0 1 7\nf = 1\n"),
                               "trailing tokens"));
    CHECK(has_error_containing(parse_config("[source]\nshape = blob 1 2\nf = 1\n"),
                               "unknown shape kind"));
    CHECK(has_error_containing(parse_config("[directions]\narc = 0 1\n"), "arc expects"));
    CHECK(has_error_containing(parse_config("[noise]\nkind = sometimes\n"),
                               "must be none, relative or absolute"));
    CHECK(has_error_containing(parse_config("[reference]\nz0 = 1\n"), "two numbers"));
}

TEST_CASE("config: semantic validation") {
    CHECK(has_error_containing(parse_config(tiny_config("forward", kRefPair, false)), "") ==
          false);  // baseline is clean

    SUBCASE("unknown mode") {
        std::string t = tiny_config("sideways", kRefPair, false);
        CHECK(has_error_containing(parse_config(t), "unknown mode"));
    }
    SUBCASE("duplicate direction angles, modulo full turns") {
        std::string t = tiny_config("forward", kRefPair, false);
        const std::string twice = "angles = 1.5 1.5\n";
        t.replace(t.find("angles = 0 1.1\n"), 15, twice);
        CHECK(has_error_containing(parse_config(t), "duplicate direction angles"));
    }
    SUBCASE("reference point inside the support") {
        std::string t = tiny_config("forward", "z0 = 1.5 1.3\ntau = 1\n", false);
        CHECK_FALSE(parse_config(t).ok());
    }
    SUBCASE("phaseless indicator modes need the tau set {0, tau1}") {
        CHECK(has_error_containing(
            parse_config(tiny_config("sample-i1", "z0 = 4 4\ntau = 1\ntau = 2\n")),
            "tau set {0, tau1}"));
    }
    SUBCASE("retrieval modes need three linearly independent taus") {
        CHECK(has_error_containing(
            parse_config(tiny_config("full-scheme-two", "z0 = 4 4\ntau = 1\ntau = -1\n")),
            "exactly three tau"));
        CHECK(has_error_containing(
            parse_config(
                tiny_config("full-scheme-two", "z0 = 4 4\ntau = 1\ntau = -1\ntau = 3\n")),
            "linearly independent"));
        CHECK(has_error_containing(
            parse_config(tiny_config("retrieve",
                                     "z0 = 4 4\nz0 = 5 5\ntau = 1\ntau = -1\ntau = 0 1\n")),
            "exactly one z0"));
    }
    SUBCASE("sampling section is required for sampling modes") {
        CHECK(has_error_containing(parse_config(tiny_config("sample-i1", kRefPair, false)),
                                   "[sampling]"));
    }
    SUBCASE("partial sampling section") {
        std::string t = tiny_config("forward", kRefPair, false);
        t += "[sampling]\nnx = 10\n";
        CHECK(has_error_containing(parse_config(t), "all of x_lo"));
    }
    SUBCASE("noise level and kind must agree") {
        CHECK(has_error_containing(
            parse_config(tiny_config("forward", kRefPair, false, "kind = relative\n")),
            "level is required"));
        CHECK(has_error_containing(
            parse_config(tiny_config("forward", kRefPair, false, "kind = none\nlevel = 0.1\n")),
            "kind is none"));
    }
    SUBCASE("wavenumber lattice must start at or above k_min") {
        std::string t = tiny_config("forward", kRefPair, false);
        t.replace(t.find("count = 4\n"), 10, "count = 40\n");
        CHECK_FALSE(parse_config(t).ok());
    }
    SUBCASE("every problem is reported, not just the first") {
        const ConfigParseResult r = parse_config("[scenario]\nbogus = 1\nalso = 2\n");
        CHECK(r.errors.size() >= 4);  // two line errors + missing name/mode/...
    }
}

TEST_CASE("config: serialize / parse round trip") {
    const std::string text =
        "[scenario]\nname = roundtrip\nmode = full-scheme-two\nout = some/dir\n"
        "[source]\ng = k^2\n"
        "shape = polygon 3 3 0 4 0 3.5 1\nf = x*y + 1\n"
        "shape = diff disc 0 0 1 rect -0.25 0.25 -0.25 0.25\nf = 2\n"
        "[wavenumbers]\nk_min = 0.5\nk_max = 18\ncount = 18\n"
        "[directions]\nangles = 0 0.7853981633974483 -0.5\n"
        "[reference]\nz0 = 8 8\ntau = 1\ntau = -1\ntau = 0 1\n"
        "[noise]\nkind = relative\nlevel = 0.25\nseed = 99\n"
        "[sampling]\nx_lo = -2\nx_hi = 5\ny_lo = -2\ny_hi = 5\nnx = 33\nny = 41\n";
    const ConfigParseResult first = parse_config(text);
    REQUIRE(first.ok());

    const std::string canonical = serialize_config(*first.config);
    const ConfigParseResult second = parse_config(canonical);
    REQUIRE(second.ok());
    CHECK(*first.config == *second.config);
    CHECK(serialize_config(*second.config) == canonical);
}

TEST_CASE("runner: forward mode writes dataset, truth and manifest") {
    const fs::path out = fresh_dir("forward");
    const ConfigParseResult r = parse_config(tiny_config("forward", kRefTriple, false));
    REQUIRE(r.ok());

    RunOverrides ov;
    ov.out_dir = out.string();
    ov.threads = 2;
    const RunResult res = run_scenario(*r.config, ov);
    CHECK(res.out_dir == out);

    REQUIRE(res.artifacts.size() == 2);
    CHECK(res.artifacts[0].path == "phaseless.csv");
    CHECK(res.artifacts[1].path == "phased_truth.csv");
    for (const Artifact& a : res.artifacts) {
        const fs::path p = out / a.path;
        REQUIRE(fs::exists(p));
        CHECK(sha256_file_hex(p) == a.sha256);
    }

    // the dataset round-trips and matches a direct synthesis
    const Dataset loaded = load_phaseless_csv(out / "phaseless.csv");
    CHECK(loaded.direction_count() == 2);
    CHECK(loaded.tau_count() == 3);
    CHECK(loaded.grid().count == 4);
    CHECK(loaded.z0() == Point2{4, 4});

    const nlohmann::json manifest = nlohmann::json::parse(slurp(res.manifest_path));
    CHECK(manifest.contains("config_sha256"));
    CHECK(manifest["seed"] == 0);
    CHECK(manifest["artifacts"].size() == 2);
    CHECK(manifest["artifacts"][0]["path"] == "phaseless.csv");
    CHECK(manifest["artifacts"][0]["sha256"] == res.artifacts[0].sha256);
    CHECK(manifest.contains("wall_time_ms"));
}

TEST_CASE("runner: identical config and seed give byte-identical artifacts") {
    const ConfigParseResult r = parse_config(
        tiny_config("forward", kRefTriple, false, "kind = relative\nlevel = 0.2\nseed = 5\n"));
    REQUIRE(r.ok());

    const fs::path out_a = fresh_dir("det_a"), out_b = fresh_dir("det_b");
    RunOverrides ov;
    ov.threads = 2;
    ov.out_dir = out_a.string();
    const RunResult res_a = run_scenario(*r.config, ov);
    ov.out_dir = out_b.string();
    ov.threads = 1;  // thread count must not affect bytes either
    const RunResult res_b = run_scenario(*r.config, ov);

    REQUIRE(res_a.artifacts.size() == res_b.artifacts.size());
    for (std::size_t i = 0; i < res_a.artifacts.size(); ++i) {
        CHECK(res_a.artifacts[i].path == res_b.artifacts[i].path);
        CHECK(res_a.artifacts[i].sha256 == res_b.artifacts[i].sha256);
        CHECK(slurp(out_a / res_a.artifacts[i].path) == slurp(out_b / res_b.artifacts[i].path));
    }
    // manifests agree on everything but wall time
    const nlohmann::json ma = nlohmann::json::parse(slurp(res_a.manifest_path));
    const nlohmann::json mb = nlohmann::json::parse(slurp(res_b.manifest_path));
    CHECK(ma["config_sha256"] == mb["config_sha256"]);
    CHECK(ma["artifacts"] == mb["artifacts"]);
}

TEST_CASE("runner: seed override changes noisy bytes and the config hash") {
    const ConfigParseResult r = parse_config(
        tiny_config("forward", kRefTriple, false, "kind = relative\nlevel = 0.2\nseed = 5\n"));
    REQUIRE(r.ok());

    const fs::path out_a = fresh_dir("seed_a"), out_b = fresh_dir("seed_b");
    RunOverrides ov;
    ov.threads = 2;
    ov.out_dir = out_a.string();
    const RunResult res_a = run_scenario(*r.config, ov);
    ov.out_dir = out_b.string();
    ov.seed = 7;
    const RunResult res_b = run_scenario(*r.config, ov);

    CHECK(res_a.artifacts[0].sha256 != res_b.artifacts[0].sha256);  // phaseless.csv
    CHECK(res_a.artifacts[1].sha256 == res_b.artifacts[1].sha256);  // truth is noise-free
    const nlohmann::json ma = nlohmann::json::parse(slurp(res_a.manifest_path));
    const nlohmann::json mb = nlohmann::json::parse(slurp(res_b.manifest_path));
    CHECK(ma["config_sha256"] != mb["config_sha256"]);
    CHECK(mb["seed"] == 7);
}

TEST_CASE("runner: retrieve mode recovers the truth without noise") {
    const fs::path out = fresh_dir("retrieve");
    const ConfigParseResult r = parse_config(tiny_config("retrieve", kRefTriple, false));
    REQUIRE(r.ok());
    RunOverrides ov;
    ov.out_dir = out.string();
    ov.threads = 2;
    run_scenario(*r.config, ov);

    const std::vector<FarFieldRecord> truth = load_phased_csv(out / "phased_truth.csv");
    const std::vector<FarFieldRecord> got = load_phased_csv(out / "phased_retrieved.csv");
    REQUIRE(truth.size() == got.size());
    double scale = 0;
    for (const FarFieldRecord& t : truth) scale = std::max(scale, std::abs(t.value));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        CHECK(got[i].k == truth[i].k);
        CHECK(std::abs(got[i].value - truth[i].value) <= 1e-10 * scale);
    }
    CHECK(slurp(out / "phased_retrieved.csv").rfind("angle_rad,k,re,im,source\n", 0) == 0);
}

TEST_CASE("runner: multi-reference phaseless sampling emits per-reference and combined fields") {
    const fs::path out = fresh_dir("sample_i1");
    const ConfigParseResult r =
        parse_config(tiny_config("sample-i1", "z0 = 4 4\nz0 = 12 12\ntau = 0\ntau = 1\n"));
    REQUIRE(r.ok());
    RunOverrides ov;
    ov.out_dir = out.string();
    ov.threads = 2;
    const RunResult res = run_scenario(*r.config, ov);

    std::vector<std::string> names;
    for (const Artifact& a : res.artifacts) names.push_back(a.path);
    const std::vector<std::string> expected{"i1_1.csv", "i1_1.pgm", "i1_2.csv",
                                            "i1_2.pgm", "i1_combined.csv", "i1_combined.pgm"};
    CHECK(names == expected);
    CHECK(slurp(out / "i1_1.csv").rfind("x,y,value\n", 0) == 0);
    CHECK(slurp(out / "i1_1.pgm").rfind("P2\n12 12\n255\n", 0) == 0);
}

TEST_CASE("runner: phased pipeline emits the retrieved table and its field") {
    const fs::path out = fresh_dir("scheme_two");
    const ConfigParseResult r = parse_config(tiny_config("full-scheme-two", kRefTriple));
    REQUIRE(r.ok());
    RunOverrides ov;
    ov.out_dir = out.string();
    ov.threads = 2;
    const RunResult res = run_scenario(*r.config, ov);

    std::vector<std::string> names;
    for (const Artifact& a : res.artifacts) names.push_back(a.path);
    const std::vector<std::string> expected{"phaseless.csv", "phased_truth.csv",
                                            "phased_retrieved.csv", "i2.csv", "i2.pgm"};
    CHECK(names == expected);
}

TEST_CASE("runner: output directory precedence") {
    const fs::path from_env = fresh_dir("via_env"), from_flag = fresh_dir("via_flag");
    ConfigParseResult r = parse_config(tiny_config("forward", kRefTriple, false));
    REQUIRE(r.ok());

    setenv("INVSRC_OUT_DIR", from_env.c_str(), 1);
    const RunResult res_env = run_scenario(*r.config, {});
    CHECK(res_env.out_dir == from_env);
    CHECK(fs::exists(from_env / "phaseless.csv"));

    RunOverrides ov;
    ov.out_dir = from_flag.string();
    const RunResult res_flag = run_scenario(*r.config, ov);
    CHECK(res_flag.out_dir == from_flag);
    unsetenv("INVSRC_OUT_DIR");
}

TEST_CASE("cli binary: exit codes") {
    const fs::path dir = fresh_dir("spawn");
    const fs::path good = dir / "good.cfg";
    spit(good, tiny_config("retrieve", kRefTriple, false));
    const fs::path bad_syntax = dir / "bad.cfg";
    spit(bad_syntax, "not a config\n");
    // parses cleanly but integrates a profile with a pole inside the support
    const fs::path bad_numeric = dir / "pole.cfg";
    std::string pole = tiny_config("forward", kRefTriple, false);
    pole.replace(pole.find("f = 5\n"), 6, "f = 1/(x - 1.5)\n");
    spit(bad_numeric, pole);

    CHECK(run_cli("validate " + good.string()) == 0);
    CHECK(run_cli("run " + good.string() + " --out " + (dir / "out").string()) == 0);
    CHECK(run_cli("validate " + bad_syntax.string()) == 2);
    CHECK(run_cli("run " + bad_syntax.string()) == 2);
    CHECK(run_cli("validate " + (dir / "missing.cfg").string()) == 2);
    CHECK(run_cli("run " + bad_numeric.string() + " --out " + (dir / "out2").string()) == 3);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("") == 2);
    CHECK(run_cli("run " + good.string() + " --seed -3") == 2);
}

TEST_CASE("cli binary: run then validate leave matching artifacts") {
    const fs::path dir = fresh_dir("spawn_run");
    const fs::path cfg = dir / "s.cfg";
    spit(cfg, tiny_config("sample-i2", kRefTriple));
    CHECK(run_cli("run " + cfg.string() + " --out " + (dir / "out").string() +
                  " --threads 2") == 0);
    CHECK(fs::exists(dir / "out" / "i2.csv"));
    CHECK(fs::exists(dir / "out" / "i2.pgm"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
    const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
    for (const auto& a : manifest["artifacts"])
        CHECK(sha256_file_hex(dir / "out" / a["path"].get<std::string>()) == a["sha256"]);
}
