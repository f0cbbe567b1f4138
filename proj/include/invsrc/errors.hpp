#pragma once

#include <stdexcept>
#include <string>

namespace invsrc {

// Expression evaluation failure (division by zero, zero to a negative power).
struct evaluation_error : std::runtime_error {
    explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature refinement did not reach the requested relative accuracy.
struct quadrature_error : std::runtime_error {
    double achieved;
    quadrature_error(const std::string& what, double achieved_rel)
        : std::runtime_error(what), achieved(achieved_rel) {}
};

// Malformed or incomplete measurement lattice (missing records, duplicate
// cells, inconsistent reference point, unusable tau set).
struct dataset_error : std::runtime_error {
    explicit dataset_error(const std::string& what) : std::runtime_error(what) {}
};

// Degenerate anchor configuration for point recovery.
struct anchor_error : std::invalid_argument {
    explicit anchor_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace invsrc
