#pragma once

#include <vector>

#include "invsrc/forward.hpp"
#include "invsrc/scene.hpp"

namespace invsrc {

// Three non-collinear anchor points in the complex plane.  Construction
// rejects triples whose spanned parallelogram area is at or below
// 1e-10 * max(|z2-z1|, |z3-z1|)^2.
struct AnchorTriple {
    Complex z1, z2, z3;
    AnchorTriple(Complex z1, Complex z2, Complex z3);
};

// Non-negative distances to the three anchors.
struct DistanceTriple {
    double r1, r2, r3;
    DistanceTriple(double r1, double r2, double r3);
};

// Recovers the point Z with |Z - z_j| = r_j from the three circles:
//   1. if some r_j vanishes (<= 1e-14), Z = z_j;
//   2. place M on the ray z2 -> z1 at distance r2 from z2;
//   3. rotate M about z2 by the triangle angle alpha at z2 (law of cosines,
//      cosine clamped to [-1,1]) to get the two circle-1/circle-2
//      intersection candidates;
//   4. keep the candidate whose distance to z3 best matches r3, preferring
//      the clockwise one on a tie;
//   5. polish the kept candidate with a least-squares Gauss-Newton pass over
//      all three circles (pairwise intersection is ill-conditioned near
//      tangency; the joint system is not).
// Exact data yields Z up to roundoff; noisy distances degrade the result
// Lipschitz-continuously.
Complex retrieve_point(const AnchorTriple& anchors, const DistanceTriple& dists);

// Phase retrieval across a lattice with reference amplitudes tau_1..tau_3:
// at each (direction, k) the anchors are -tau_t * e^{-i k (x . z0)} and the
// distances are the measured magnitudes, so retrieve_point returns the
// source far field.  Requires exactly three tau values whose pairwise
// differences from tau_1 are linearly independent over the reals.  Output is
// direction-major, then wavenumber, matching the dataset lattice.
std::vector<FarFieldRecord> retrieve_far_field(const Dataset& ds);

}  // namespace invsrc
