#include "invsrc/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "invsrc/errors.hpp"

namespace invsrc {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double_field(const std::string& field, const std::filesystem::path& path,
                          std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0')
        throw dataset_error(path.string() + ":" + std::to_string(line_no) +
                            ": malformed numeric field '" + field + "'");
    return v;
}

std::vector<std::string> read_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(std::move(line));
        start = nl + 1;
    }
    return lines;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_phaseless_csv(const std::filesystem::path& path, const Dataset& ds) {
    std::ofstream out = open_out(path);
    out << "angle_rad,k,tau_re,tau_im,z0_x,z0_y,magnitude\n";
    for (std::size_t i = 0; i < ds.phaseless_count(); ++i) {
        const PhaselessRecord r = ds.phaseless_record(i);
        out << format_double(r.direction.angle) << ',' << format_double(r.k) << ','
            << format_double(r.tau.real()) << ',' << format_double(r.tau.imag()) << ','
            << format_double(r.z0.x) << ',' << format_double(r.z0.y) << ','
            << format_double(r.magnitude) << '\n';
    }
}

Dataset load_phaseless_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(read_all(path));
    if (lines.empty() || lines[0] != "angle_rad,k,tau_re,tau_im,z0_x,z0_y,magnitude")
        throw dataset_error(path.string() + ": missing or unexpected phaseless CSV header");

    struct Row {
        double angle, k;
        Complex tau;
        Point2 z0;
        double magnitude;
    };
    std::vector<Row> rows;
    std::vector<double> angles, ks;
    std::vector<Complex> taus;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto fields = split_csv_line(lines[li]);
        if (fields.size() != 7)
            throw dataset_error(path.string() + ":" + std::to_string(li + 1) +
                                ": expected 7 fields");
        Row r;
        r.angle = parse_double_field(fields[0], path, li + 1);
        r.k = parse_double_field(fields[1], path, li + 1);
        r.tau = {parse_double_field(fields[2], path, li + 1),
                 parse_double_field(fields[3], path, li + 1)};
        r.z0 = {parse_double_field(fields[4], path, li + 1),
                parse_double_field(fields[5], path, li + 1)};
        r.magnitude = parse_double_field(fields[6], path, li + 1);
        rows.push_back(r);
        if (std::find(angles.begin(), angles.end(), r.angle) == angles.end())
            angles.push_back(r.angle);
        if (std::find(ks.begin(), ks.end(), r.k) == ks.end()) ks.push_back(r.k);
        if (std::find(taus.begin(), taus.end(), r.tau) == taus.end()) taus.push_back(r.tau);
    }
    if (rows.empty()) throw dataset_error(path.string() + ": no data rows");
    for (const Row& r : rows)
        if (!(r.z0 == rows.front().z0))
            throw dataset_error(path.string() + ": rows disagree on the reference point z0");

    std::sort(ks.begin(), ks.end());
    const double dk = 2.0 * ks.front();
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const double expected = (j + 0.5) * dk;
        if (std::abs(ks[j] - expected) > 1e-9 * std::max(1.0, expected))
            throw dataset_error(path.string() + ": wavenumbers do not form a midpoint lattice");
    }
    // k_min is not stored in the file; the first node is the tightest bound
    // consistent with the lattice.
    WaveNumberGrid grid(ks.front(), dk * ks.size(), int(ks.size()));

    std::vector<Direction> directions;
    for (double a : angles) directions.push_back({a});
    Dataset ds(grid, directions, rows.front().z0, taus);

    std::vector<bool> seen(ds.phaseless_count(), false);
    for (const Row& r : rows) {
        const std::size_t d = std::find(angles.begin(), angles.end(), r.angle) - angles.begin();
        const std::size_t j = std::find(ks.begin(), ks.end(), r.k) - ks.begin();
        const std::size_t t = std::find(taus.begin(), taus.end(), r.tau) - taus.begin();
        const std::size_t idx = ds.lattice_index(d, j, t);
        if (seen[idx]) throw dataset_error(path.string() + ": duplicate lattice record");
        seen[idx] = true;
        ds.set_magnitude(d, j, t, r.magnitude);
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw dataset_error(path.string() + ": lattice has missing records");
    return ds;
}

void write_phased_csv(const std::filesystem::path& path,
                      const std::vector<FarFieldRecord>& records,
                      const std::optional<std::string>& source_label) {
    std::ofstream out = open_out(path);
    out << (source_label ? "angle_rad,k,re,im,source\n" : "angle_rad,k,re,im\n");
    for (const FarFieldRecord& r : records) {
        out << format_double(r.direction.angle) << ',' << format_double(r.k) << ','
            << format_double(r.value.real()) << ',' << format_double(r.value.imag());
        if (source_label) out << ',' << *source_label;
        out << '\n';
    }
}

std::vector<FarFieldRecord> load_phased_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(read_all(path));
    if (lines.empty()) throw dataset_error(path.string() + ": empty phased CSV");
    bool with_source;
    if (lines[0] == "angle_rad,k,re,im") {
        with_source = false;
    } else if (lines[0] == "angle_rad,k,re,im,source") {
        with_source = true;
    } else {
        throw dataset_error(path.string() + ": missing or unexpected phased CSV header");
    }
    std::vector<FarFieldRecord> records;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto fields = split_csv_line(lines[li]);
        if (fields.size() != (with_source ? 5u : 4u))
            throw dataset_error(path.string() + ":" + std::to_string(li + 1) +
                                ": unexpected field count");
        FarFieldRecord r;
        r.direction.angle = parse_double_field(fields[0], path, li + 1);
        r.k = parse_double_field(fields[1], path, li + 1);
        r.value = {parse_double_field(fields[2], path, li + 1),
                   parse_double_field(fields[3], path, li + 1)};
        records.push_back(r);
    }
    return records;
}

void write_field_csv(const std::filesystem::path& path, const IndicatorField& field) {
    std::ofstream out = open_out(path);
    out << "x,y,value\n";
    const SamplingGrid& g = field.grid();
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const Point2 p = g.node(ix, iy);
            out << format_double(p.x) << ',' << format_double(p.y) << ','
                << format_double(field.value(ix, iy)) << '\n';
        }
}

void write_field_pgm(const std::filesystem::path& path, const IndicatorField& field) {
    std::ofstream out = open_out(path);
    const SamplingGrid& g = field.grid();
    const double lo = field.min(), hi = field.max();
    out << "P2\n" << g.nx << ' ' << g.ny << "\n255\n";
    for (int iy = g.ny - 1; iy >= 0; --iy) {  // top row is y_hi
        for (int ix = 0; ix < g.nx; ++ix) {
            const int v =
                hi > lo ? int(std::lround((field.value(ix, iy) - lo) / (hi - lo) * 255.0)) : 0;
            out << v << (ix + 1 == g.nx ? '\n' : ' ');
        }
    }
}

std::string sha256_hex(const void* data, std::size_t size) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data, size, digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string sha256_hex(const std::string& data) { return sha256_hex(data.data(), data.size()); }

std::string sha256_file_hex(const std::filesystem::path& path) {
    return sha256_hex(read_all(path));
}

}  // namespace invsrc
