#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "invsrc/forward.hpp"
#include "invsrc/sampling.hpp"

namespace invsrc {

// Doubles are written with %.17g so parsing them back is bit-exact.
std::string format_double(double v);

// Phaseless lattice CSV, header:
//   angle_rad,k,tau_re,tau_im,z0_x,z0_y,magnitude
// Rows are in lattice order (direction-major, then wavenumber, then tau).
void write_phaseless_csv(const std::filesystem::path& path, const Dataset& ds);
Dataset load_phaseless_csv(const std::filesystem::path& path);

// Phased far-field CSV, header:
//   angle_rad,k,re,im          (plus a trailing `source` column when a
//                               provenance label such as "retrieved" is given)
void write_phased_csv(const std::filesystem::path& path, const std::vector<FarFieldRecord>& records,
                      const std::optional<std::string>& source_label = std::nullopt);
std::vector<FarFieldRecord> load_phased_csv(const std::filesystem::path& path);

// Indicator field CSV, header x,y,value, rows in storage order (y_lo row
// first, x fastest).
void write_field_csv(const std::filesystem::path& path, const IndicatorField& field);

// ASCII PGM (P2), width nx, height ny, row 0 is the y_hi row.  Values are
// min-max normalized to 0..255; a constant field renders as all zeros.
void write_field_pgm(const std::filesystem::path& path, const IndicatorField& field);

std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_hex(const std::string& data);
std::string sha256_file_hex(const std::filesystem::path& path);

}  // namespace invsrc
