#include "invsrc/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "invsrc/io.hpp"

namespace invsrc {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Forward: return "forward";
        case Mode::Retrieve: return "retrieve";
        case Mode::SampleI1: return "sample-i1";
        case Mode::SampleI2: return "sample-i2";
        case Mode::FullSchemeOne: return "full-scheme-one";
        case Mode::FullSchemeTwo: return "full-scheme-two";
    }
    return "?";
}

std::optional<Mode> mode_from_name(const std::string& name) {
    for (Mode m : {Mode::Forward, Mode::Retrieve, Mode::SampleI1, Mode::SampleI2,
                   Mode::FullSchemeOne, Mode::FullSchemeTwo})
        if (name == mode_name(m)) return m;
    return std::nullopt;
}

std::vector<Direction> ScenarioConfig::directions() const {
    std::vector<Direction> out;
    out.reserve(angles.size());
    for (double a : angles) out.push_back({a});
    return out;
}

SamplingGrid ScenarioConfig::sampling_grid() const {
    if (!sampling) throw std::invalid_argument("config: no sampling grid configured");
    return SamplingGrid(sampling->x_lo, sampling->x_hi, sampling->y_lo, sampling->y_hi,
                        sampling->nx, sampling->ny);
}

namespace {

bool shapes_equal(const Shape& a, const Shape& b);

bool shapes_equal_node(const Rectangle& a, const Rectangle& b) {
    return a.x_lo == b.x_lo && a.x_hi == b.x_hi && a.y_lo == b.y_lo && a.y_hi == b.y_hi;
}
bool shapes_equal_node(const Disc& a, const Disc& b) {
    return a.center == b.center && a.radius == b.radius;
}
bool shapes_equal_node(const Polygon& a, const Polygon& b) { return a.vertices == b.vertices; }
bool shapes_equal_node(const Difference& a, const Difference& b) {
    return shapes_equal(*a.outer, *b.outer) && shapes_equal(*a.hole, *b.hole);
}

bool shapes_equal(const Shape& a, const Shape& b) {
    return std::visit(
        [&](const auto& sa) -> bool {
            using T = std::decay_t<decltype(sa)>;
            const T* sb = std::get_if<T>(&b.node());
            return sb != nullptr && shapes_equal_node(sa, *sb);
        },
        a.node());
}

struct LineError {
    std::size_t line;
    std::string message;
};

// Accumulates raw key/value pairs before domain validation so every syntax
// error is reported in one pass.
struct RawConfig {
    std::string name;
    std::string mode;
    std::string out_dir;
    std::string g_text;
    std::vector<std::pair<std::string, std::string>> shape_f_pairs;  // shape line, f line
    std::optional<double> k_min, k_max;
    std::optional<int> k_count;
    std::vector<double> angles;
    bool have_arc = false;
    std::vector<Point2> z0s;
    std::vector<Complex> taus;
    std::string noise_kind = "none";
    std::optional<double> noise_level;
    std::optional<uint64_t> noise_seed;
    std::optional<double> sx_lo, sx_hi, sy_lo, sy_hi;
    std::optional<int> snx, sny;
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

bool parse_number(const std::string& tok, double& out) {
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end != tok.c_str() && *end == '\0' && std::isfinite(out);
}

bool parse_int(const std::string& tok, int& out) {
    char* end = nullptr;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') return false;
    out = int(v);
    return long(out) == v;
}

// Shape grammar (token stream, self-delimiting):
//   rect <x_lo> <x_hi> <y_lo> <y_hi>
//   disc <cx> <cy> <radius>
//   polygon <n> <x1> <y1> ... <xn> <yn>
//   diff <shape> <shape>
Shape parse_shape_tokens(const std::vector<std::string>& toks, std::size_t& pos) {
    auto need_number = [&](const char* what) {
        if (pos >= toks.size()) throw std::invalid_argument(std::string("missing ") + what);
        double v;
        if (!parse_number(toks[pos], v))
            throw std::invalid_argument(std::string("bad ") + what + " '" + toks[pos] + "'");
        ++pos;
        return v;
    };
    if (pos >= toks.size()) throw std::invalid_argument("missing shape kind");
    const std::string kind = toks[pos++];
    if (kind == "rect") {
        double a = need_number("rect x_lo"), b = need_number("rect x_hi");
        double c = need_number("rect y_lo"), d = need_number("rect y_hi");
        return Shape::rectangle(a, b, c, d);
    }
    if (kind == "disc") {
        double cx = need_number("disc cx"), cy = need_number("disc cy");
        double r = need_number("disc radius");
        return Shape::disc({cx, cy}, r);
    }
    if (kind == "polygon") {
        double nd = need_number("polygon vertex count");
        int n = int(nd);
        if (double(n) != nd || n < 3) throw std::invalid_argument("polygon vertex count must be an integer >= 3");
        std::vector<Point2> v;
        v.reserve(n);
        for (int i = 0; i < n; ++i) {
            double x = need_number("polygon vertex x");
            double y = need_number("polygon vertex y");
            v.push_back({x, y});
        }
        return Shape::polygon(std::move(v));
    }
    if (kind == "diff") {
        Shape outer = parse_shape_tokens(toks, pos);
        Shape hole = parse_shape_tokens(toks, pos);
        return Shape::difference(std::move(outer), std::move(hole));
    }
    throw std::invalid_argument("unknown shape kind '" + kind + "'");
}

Shape parse_shape_line(const std::string& value) {
    const std::vector<std::string> toks = tokens_of(value);
    std::size_t pos = 0;
    Shape s = parse_shape_tokens(toks, pos);
    if (pos != toks.size()) throw std::invalid_argument("trailing tokens after shape");
    return s;
}

std::string serialize_shape(const Shape& shape) {
    return std::visit(
        [&](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rectangle>) {
                return "rect " + format_double(s.x_lo) + ' ' + format_double(s.x_hi) + ' ' +
                       format_double(s.y_lo) + ' ' + format_double(s.y_hi);
            } else if constexpr (std::is_same_v<T, Disc>) {
                return "disc " + format_double(s.center.x) + ' ' + format_double(s.center.y) +
                       ' ' + format_double(s.radius);
            } else if constexpr (std::is_same_v<T, Polygon>) {
                std::string out = "polygon " + std::to_string(s.vertices.size());
                for (const Point2& p : s.vertices)
                    out += ' ' + format_double(p.x) + ' ' + format_double(p.y);
                return out;
            } else {
                return "diff " + serialize_shape(*s.outer) + ' ' + serialize_shape(*s.hole);
            }
        },
        shape.node());
}

}  // namespace

ConfigParseResult parse_config(const std::string& text) {
    ConfigParseResult result;
    std::vector<LineError> errors;
    RawConfig raw;

    std::string section;
    std::string pending_shape;
    std::size_t pending_shape_line = 0;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                errors.push_back({line_no, "unterminated section header"});
                continue;
            }
            section = s.substr(1, s.size() - 2);
            if (section != "scenario" && section != "source" && section != "reference" &&
                section != "wavenumbers" && section != "directions" && section != "noise" &&
                section != "sampling")
                errors.push_back({line_no, "unknown section [" + section + "]"});
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            errors.push_back({line_no, "expected key = value"});
            continue;
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        auto bad = [&](const std::string& msg) { errors.push_back({line_no, msg}); };

        auto expect_number = [&](std::optional<double>& slot) {
            double v;
            if (!parse_number(value, v))
                bad("key '" + key + "': expected a number, got '" + value + "'");
            else
                slot = v;
        };
        auto expect_int = [&](std::optional<int>& slot) {
            int v;
            if (!parse_int(value, v))
                bad("key '" + key + "': expected an integer, got '" + value + "'");
            else
                slot = v;
        };

        if (section == "scenario") {
            if (key == "name") raw.name = value;
            else if (key == "mode") raw.mode = value;
            else if (key == "out") raw.out_dir = value;
            else bad("unknown key '" + key + "' in [scenario]");
        } else if (section == "source") {
            if (key == "g") {
                raw.g_text = value;
            } else if (key == "shape") {
                if (!pending_shape.empty())
                    bad("shape on line " + std::to_string(pending_shape_line) +
                        " is missing its f");
                pending_shape = value;
                pending_shape_line = line_no;
            } else if (key == "f") {
                if (pending_shape.empty()) {
                    bad("f without a preceding shape");
                } else {
                    raw.shape_f_pairs.emplace_back(pending_shape, value);
                    pending_shape.clear();
                }
            } else {
                bad("unknown key '" + key + "' in [source]");
            }
        } else if (section == "reference") {
            if (key == "z0") {
                const auto toks = tokens_of(value);
                double x, y;
                if (toks.size() != 2 || !parse_number(toks[0], x) || !parse_number(toks[1], y))
                    bad("z0 expects two numbers");
                else
                    raw.z0s.push_back({x, y});
            } else if (key == "tau") {
                const auto toks = tokens_of(value);
                double re, im = 0.0;
                if (toks.empty() || toks.size() > 2 || !parse_number(toks[0], re) ||
                    (toks.size() == 2 && !parse_number(toks[1], im)))
                    bad("tau expects one or two numbers (re [im])");
                else
                    raw.taus.push_back({re, im});
            } else {
                bad("unknown key '" + key + "' in [reference]");
            }
        } else if (section == "wavenumbers") {
            if (key == "k_min") expect_number(raw.k_min);
            else if (key == "k_max") expect_number(raw.k_max);
            else if (key == "count") expect_int(raw.k_count);
            else bad("unknown key '" + key + "' in [wavenumbers]");
        } else if (section == "directions") {
            if (key == "angles") {
                for (const std::string& tok : tokens_of(value)) {
                    double a;
                    if (!parse_number(tok, a)) {
                        bad("angles: bad number '" + tok + "'");
                        break;
                    }
                    raw.angles.push_back(a);
                }
            } else if (key == "arc") {
                // arc = <start> <end> <count>: angles start + j*(end-start)/count,
                // j = 1..count (start exclusive, end inclusive).
                const auto toks = tokens_of(value);
                double a0, a1;
                int n;
                if (toks.size() != 3 || !parse_number(toks[0], a0) || !parse_number(toks[1], a1) ||
                    !parse_int(toks[2], n) || n < 1) {
                    bad("arc expects <start> <end> <count>");
                } else {
                    for (int j = 1; j <= n; ++j) raw.angles.push_back(a0 + j * (a1 - a0) / n);
                    raw.have_arc = true;
                }
            } else {
                bad("unknown key '" + key + "' in [directions]");
            }
        } else if (section == "noise") {
            if (key == "kind") {
                if (value != "none" && value != "relative" && value != "absolute")
                    bad("noise kind must be none, relative or absolute");
                else
                    raw.noise_kind = value;
            } else if (key == "level") {
                expect_number(raw.noise_level);
            } else if (key == "seed") {
                char* end = nullptr;
                unsigned long long v = std::strtoull(value.c_str(), &end, 10);
                if (end == value.c_str() || *end != '\0')
                    bad("seed must be a non-negative integer");
                else
                    raw.noise_seed = v;
            } else {
                bad("unknown key '" + key + "' in [noise]");
            }
        } else if (section == "sampling") {
            if (key == "x_lo") expect_number(raw.sx_lo);
            else if (key == "x_hi") expect_number(raw.sx_hi);
            else if (key == "y_lo") expect_number(raw.sy_lo);
            else if (key == "y_hi") expect_number(raw.sy_hi);
            else if (key == "nx") expect_int(raw.snx);
            else if (key == "ny") expect_int(raw.sny);
            else bad("unknown key '" + key + "' in [sampling]");
        } else if (section.empty()) {
            bad("key '" + key + "' before any [section]");
        }
        // unknown-section keys already reported at the header
    }
    if (!pending_shape.empty())
        errors.push_back({pending_shape_line, "shape is missing its f"});

    // ---- semantic validation ----
    std::vector<std::string> sem;
    auto fail = [&](const std::string& msg) { sem.push_back("config: " + msg); };

    ScenarioConfig cfg;
    cfg.name = raw.name;
    if (raw.name.empty()) fail("[scenario] name is required");
    if (raw.mode.empty()) {
        fail("[scenario] mode is required");
    } else if (auto m = mode_from_name(raw.mode)) {
        cfg.mode = *m;
    } else {
        fail("unknown mode '" + raw.mode + "'");
    }
    cfg.out_dir = raw.out_dir;

    if (raw.g_text.empty()) {
        fail("[source] g is required");
    } else {
        try {
            cfg.g = Expression::parse(raw.g_text);
        } catch (const std::exception& e) {
            fail(std::string("g: ") + e.what());
        }
    }
    if (raw.shape_f_pairs.empty()) fail("[source] needs at least one shape/f pair");
    for (const auto& [shape_text, f_text] : raw.shape_f_pairs) {
        try {
            Shape shape = parse_shape_line(shape_text);
            Expression f = Expression::parse(f_text);
            cfg.components.push_back({std::move(shape), std::move(f)});
        } catch (const std::exception& e) {
            fail(std::string("component: ") + e.what());
        }
    }

    if (!raw.k_min || !raw.k_max || !raw.k_count) {
        fail("[wavenumbers] k_min, k_max and count are all required");
    } else {
        cfg.k_min = *raw.k_min;
        cfg.k_max = *raw.k_max;
        cfg.k_count = *raw.k_count;
        try {
            (void)cfg.wavenumbers();
        } catch (const std::exception& e) {
            fail(e.what());
        }
    }

    cfg.angles = raw.angles;
    if (cfg.angles.empty()) fail("[directions] needs angles or arc");

    cfg.z0s = raw.z0s;
    cfg.taus = raw.taus;

    if (raw.noise_kind == "none") {
        cfg.noise = {NoiseSpec::Kind::None, 0.0, raw.noise_seed.value_or(0)};
        if (raw.noise_level && *raw.noise_level != 0.0)
            fail("[noise] level given but kind is none");
    } else {
        if (!raw.noise_level) {
            fail("[noise] level is required for kind " + raw.noise_kind);
        } else if (*raw.noise_level < 0.0) {
            fail("[noise] level must be >= 0");
        } else {
            cfg.noise = {raw.noise_kind == "relative" ? NoiseSpec::Kind::Relative
                                                      : NoiseSpec::Kind::Absolute,
                         *raw.noise_level, raw.noise_seed.value_or(0)};
        }
    }

    const bool any_sampling =
        raw.sx_lo || raw.sx_hi || raw.sy_lo || raw.sy_hi || raw.snx || raw.sny;
    if (any_sampling) {
        if (!(raw.sx_lo && raw.sx_hi && raw.sy_lo && raw.sy_hi && raw.snx && raw.sny)) {
            fail("[sampling] needs all of x_lo, x_hi, y_lo, y_hi, nx, ny");
        } else {
            cfg.sampling = SamplingSpec{*raw.sx_lo, *raw.sx_hi, *raw.sy_lo,
                                        *raw.sy_hi, *raw.snx,  *raw.sny};
            try {
                (void)cfg.sampling_grid();
            } catch (const std::exception& e) {
                fail(e.what());
            }
        }
    }

    // Cross-field rules shared by every mode.
    if (!cfg.components.empty()) {
        try {
            SourceModel model(cfg.components, cfg.g);
            for (const Point2& z0 : cfg.z0s) require_outside_support(model, z0);
        } catch (const std::exception& e) {
            fail(e.what());
        }
    }
    for (std::size_t i = 0; i < cfg.angles.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.angles.size(); ++j) {
            double a = std::fmod(cfg.angles[i], 2.0 * M_PI), b = std::fmod(cfg.angles[j], 2.0 * M_PI);
            if (a < 0) a += 2.0 * M_PI;
            if (b < 0) b += 2.0 * M_PI;
            if (a == b) {
                fail("duplicate direction angles");
                i = cfg.angles.size();
                break;
            }
        }
    for (std::size_t i = 0; i < cfg.taus.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.taus.size(); ++j)
            if (cfg.taus[i] == cfg.taus[j]) {
                fail("duplicate tau values");
                i = cfg.taus.size();
                break;
            }
    for (std::size_t i = 0; i < cfg.z0s.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.z0s.size(); ++j)
            if (cfg.z0s[i] == cfg.z0s[j]) {
                fail("duplicate z0 points");
                i = cfg.z0s.size();
                break;
            }
    if (cfg.z0s.empty()) fail("[reference] needs at least one z0");
    if (cfg.taus.empty()) fail("[reference] needs at least one tau");

    // Mode-specific completeness.
    const Complex zero{0.0, 0.0};
    const bool has_zero_tau = std::find(cfg.taus.begin(), cfg.taus.end(), zero) != cfg.taus.end();
    switch (cfg.mode) {
        case Mode::SampleI1:
        case Mode::FullSchemeOne:
            if (cfg.taus.size() != 2 || !has_zero_tau)
                fail(std::string(mode_name(cfg.mode)) +
                     " needs exactly the tau set {0, tau1} with tau1 != 0");
            break;
        case Mode::Retrieve:
        case Mode::FullSchemeTwo: {
            if (cfg.taus.size() != 3) {
                fail(std::string(mode_name(cfg.mode)) + " needs exactly three tau values");
            } else {
                const Complex a = cfg.taus[1] - cfg.taus[0], b = cfg.taus[2] - cfg.taus[0];
                const double area = std::abs(std::imag(a * std::conj(b)));
                const double scale = std::max(std::abs(a), std::abs(b));
                if (!(area > 1e-10 * scale * scale))
                    fail("tau differences must be linearly independent over the reals");
            }
            if (cfg.z0s.size() != 1)
                fail(std::string(mode_name(cfg.mode)) + " needs exactly one z0");
            break;
        }
        case Mode::SampleI2:
            if (cfg.z0s.size() != 1) fail("sample-i2 needs exactly one z0");
            break;
        case Mode::Forward:
            break;
    }
    const bool needs_sampling = cfg.mode == Mode::SampleI1 || cfg.mode == Mode::SampleI2 ||
                                cfg.mode == Mode::FullSchemeOne || cfg.mode == Mode::FullSchemeTwo;
    if (needs_sampling && !cfg.sampling) fail("[sampling] section is required for this mode");

    for (const LineError& e : errors)
        result.errors.push_back("line " + std::to_string(e.line) + ": " + e.message);
    result.errors.insert(result.errors.end(), sem.begin(), sem.end());
    if (result.errors.empty()) result.config = std::move(cfg);
    return result;
}

ConfigParseResult parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ConfigParseResult r;
        r.errors.push_back("cannot open config file: " + path);
        return r;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "[scenario]\n";
    out << "name = " << cfg.name << "\n";
    out << "mode = " << mode_name(cfg.mode) << "\n";
    if (!cfg.out_dir.empty()) out << "out = " << cfg.out_dir << "\n";
    out << "\n[source]\n";
    out << "g = " << cfg.g.text() << "\n";
    for (const SourceComponent& c : cfg.components) {
        out << "shape = " << serialize_shape(c.shape) << "\n";
        out << "f = " << c.profile.text() << "\n";
    }
    out << "\n[wavenumbers]\n";
    out << "k_min = " << format_double(cfg.k_min) << "\n";
    out << "k_max = " << format_double(cfg.k_max) << "\n";
    out << "count = " << cfg.k_count << "\n";
    out << "\n[directions]\n";
    out << "angles =";
    for (double a : cfg.angles) out << ' ' << format_double(a);
    out << "\n";
    out << "\n[reference]\n";
    for (const Point2& z : cfg.z0s)
        out << "z0 = " << format_double(z.x) << ' ' << format_double(z.y) << "\n";
    for (const Complex& t : cfg.taus)
        out << "tau = " << format_double(t.real()) << ' ' << format_double(t.imag()) << "\n";
    out << "\n[noise]\n";
    switch (cfg.noise.kind) {
        case NoiseSpec::Kind::None: out << "kind = none\n"; break;
        case NoiseSpec::Kind::Relative:
            out << "kind = relative\nlevel = " << format_double(cfg.noise.level) << "\n";
            break;
        case NoiseSpec::Kind::Absolute:
            out << "kind = absolute\nlevel = " << format_double(cfg.noise.level) << "\n";
            break;
    }
    out << "seed = " << cfg.noise.seed << "\n";
    if (cfg.sampling) {
        out << "\n[sampling]\n";
        out << "x_lo = " << format_double(cfg.sampling->x_lo) << "\n";
        out << "x_hi = " << format_double(cfg.sampling->x_hi) << "\n";
        out << "y_lo = " << format_double(cfg.sampling->y_lo) << "\n";
        out << "y_hi = " << format_double(cfg.sampling->y_hi) << "\n";
        out << "nx = " << cfg.sampling->nx << "\n";
        out << "ny = " << cfg.sampling->ny << "\n";
    }
    return out.str();
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
    if (!(a.name == b.name && a.mode == b.mode && a.out_dir == b.out_dir &&
          a.k_min == b.k_min && a.k_max == b.k_max && a.k_count == b.k_count &&
          a.angles == b.angles && a.z0s.size() == b.z0s.size() && a.taus == b.taus &&
          a.noise.kind == b.noise.kind && a.noise.level == b.noise.level &&
          a.noise.seed == b.noise.seed))
        return false;
    for (std::size_t i = 0; i < a.z0s.size(); ++i)
        if (!(a.z0s[i] == b.z0s[i])) return false;
    if (a.sampling.has_value() != b.sampling.has_value()) return false;
    if (a.sampling) {
        const SamplingSpec& s = *a.sampling;
        const SamplingSpec& t = *b.sampling;
        if (!(s.x_lo == t.x_lo && s.x_hi == t.x_hi && s.y_lo == t.y_lo && s.y_hi == t.y_hi &&
              s.nx == t.nx && s.ny == t.ny))
            return false;
    }
    if (!(a.g == b.g)) return false;
    if (a.components.size() != b.components.size()) return false;
    for (std::size_t i = 0; i < a.components.size(); ++i) {
        if (!(a.components[i].profile == b.components[i].profile)) return false;
        if (!shapes_equal(a.components[i].shape, b.components[i].shape)) return false;
    }
    return true;
}

}  // namespace invsrc
