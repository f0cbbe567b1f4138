#pragma once

#include <complex>
#include <vector>

#include "invsrc/scene.hpp"

namespace invsrc {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached rule of order n (n >= 1).  Thread safe; references stay valid for
// the lifetime of the process.
const GaussLegendreRule& gauss_legendre(int n);

// Node count along an axis of length `len` at wavenumber k: about three
// nodes per unit phase, floored at 8 so small or low-frequency axes still
// get a meaningful rule.
int axis_node_count(double k, double len);

// Computes I = \int_shape e^{-i k (d.unit() . y)} f(y) dy.
//
// Each shape uses a rule matched to its geometry (tensor Gauss-Legendre for
// rectangles, radial Gauss-Legendre x uniform angular for discs, a signed
// centroid fan of tensor rules on collapsed coordinates for polygons, outer
// minus hole for differences), at the axis_node_count density.  The value is
// recomputed at 1.5x density; if the relative difference exceeds 1e-9 one
// more refinement is attempted, after which quadrature_error is thrown with
// the achieved estimate.
Complex shape_farfield_integral(const Shape& shape, const Expression& f, Direction d, double k);

}  // namespace invsrc
