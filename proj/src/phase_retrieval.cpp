#include "invsrc/phase_retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "invsrc/errors.hpp"

namespace invsrc {

namespace {

constexpr double kZeroDistance = 1e-14;
constexpr double kCollinearEps = 1e-10;

bool spans_plane(Complex a, Complex b) {
    const double area = std::abs(std::imag(a * std::conj(b)));
    const double scale = std::max(std::abs(a), std::abs(b));
    return area > kCollinearEps * scale * scale;
}

// Least-squares polish of a selected candidate against all three circles
// (Gauss-Newton on F_j(Z) = |Z - z_j|^2 - r_j^2).  The pairwise circle
// intersection loses digits near tangency, i.e. when Z is almost collinear
// with two anchors; the joint Jacobian rows 2(Z - z_j) stay independent for
// non-collinear anchors, so a few steps recover machine accuracy without
// ever switching the branch the selection step picked.
Complex polish(const AnchorTriple& anchors, const DistanceTriple& dists, Complex Z) {
    const Complex zs[3] = {anchors.z1, anchors.z2, anchors.z3};
    const double rs[3] = {dists.r1, dists.r2, dists.r3};
    for (int iter = 0; iter < 4; ++iter) {
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (int i = 0; i < 3; ++i) {
            const Complex dz = Z - zs[i];
            const double jx = 2.0 * dz.real(), jy = 2.0 * dz.imag();
            const double f = std::norm(dz) - rs[i] * rs[i];
            a11 += jx * jx;
            a12 += jx * jy;
            a22 += jy * jy;
            b1 += jx * f;
            b2 += jy * f;
        }
        const double det = a11 * a22 - a12 * a12;
        if (!(det > 0.0) || !std::isfinite(det)) break;
        const Complex step{(a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det};
        Z -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(Z))) break;
    }
    return Z;
}

}  // namespace

AnchorTriple::AnchorTriple(Complex z1_, Complex z2_, Complex z3_) : z1(z1_), z2(z2_), z3(z3_) {
    if (!spans_plane(z2 - z1, z3 - z1))
        throw anchor_error("anchor triple: points are collinear or too close");
}

DistanceTriple::DistanceTriple(double r1_, double r2_, double r3_) : r1(r1_), r2(r2_), r3(r3_) {
    if (!(r1 >= 0.0 && r2 >= 0.0 && r3 >= 0.0))
        throw std::invalid_argument("distance triple: distances must be >= 0");
}

Complex retrieve_point(const AnchorTriple& anchors, const DistanceTriple& dists) {
    if (dists.r1 <= kZeroDistance) return anchors.z1;
    if (dists.r2 <= kZeroDistance) return anchors.z2;
    if (dists.r3 <= kZeroDistance) return anchors.z3;

    const double d12 = std::abs(anchors.z1 - anchors.z2);
    // M sits on the ray z2 -> z1 at distance r2, i.e. on circle 2.
    const Complex arm = (dists.r2 / d12) * (anchors.z1 - anchors.z2);

    // Angle at z2 in the triangle (z2, z1, Z); clamping absorbs distance
    // triples that noise has pushed past the triangle inequality.
    double cos_a =
        (dists.r2 * dists.r2 + d12 * d12 - dists.r1 * dists.r1) / (2.0 * dists.r2 * d12);
    cos_a = std::clamp(cos_a, -1.0, 1.0);
    const double sin_a = std::sqrt(1.0 - cos_a * cos_a);

    const Complex rot{cos_a, sin_a};
    const Complex cand_a = anchors.z2 + arm * std::conj(rot);  // clockwise
    const Complex cand_b = anchors.z2 + arm * rot;             // counterclockwise

    const double miss_a = std::abs(std::abs(cand_a - anchors.z3) - dists.r3);
    const double miss_b = std::abs(std::abs(cand_b - anchors.z3) - dists.r3);
    return polish(anchors, dists, miss_a <= miss_b ? cand_a : cand_b);
}

std::vector<FarFieldRecord> retrieve_far_field(const Dataset& ds) {
    if (ds.tau_count() != 3)
        throw dataset_error("phase retrieval: dataset must carry exactly three tau values");
    const Complex t1 = ds.taus()[0], t2 = ds.taus()[1], t3 = ds.taus()[2];
    if (!spans_plane(t2 - t1, t3 - t1))
        throw dataset_error(
            "phase retrieval: tau differences must be linearly independent over the reals");

    std::vector<FarFieldRecord> out;
    out.reserve(ds.direction_count() * std::size_t(ds.grid().count));
    for (std::size_t d = 0; d < ds.direction_count(); ++d) {
        const Direction dir = ds.directions()[d];
        const Point2 u = dir.unit();
        for (int j = 0; j < ds.grid().count; ++j) {
            const double k = ds.grid().node(j);
            const Complex phase = std::polar(1.0, -k * dot(u, ds.z0()));
            // |u_S - (-tau e^{-ik x.z0})| is exactly the measured magnitude,
            // so the negated reference terms act as anchors.
            const AnchorTriple anchors(-t1 * phase, -t2 * phase, -t3 * phase);
            const DistanceTriple dists(ds.magnitude(d, j, 0), ds.magnitude(d, j, 1),
                                       ds.magnitude(d, j, 2));
            out.push_back({dir, k, retrieve_point(anchors, dists)});
        }
    }
    return out;
}

}  // namespace invsrc
