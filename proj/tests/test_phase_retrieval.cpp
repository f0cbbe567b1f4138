#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "invsrc/errors.hpp"
#include "invsrc/forward.hpp"
#include "invsrc/phase_retrieval.hpp"
#include "invsrc/rng.hpp"

using namespace invsrc;

namespace {

double rand_in(double lo, double hi, uint64_t seed, uint64_t ctr) {
    return lo + (hi - lo) * 0.5 * (uniform_pm1(seed, ctr) + 1.0);
}

DistanceTriple exact_distances(Complex z, const AnchorTriple& a) {
    return {std::abs(z - a.z1), std::abs(z - a.z2), std::abs(z - a.z3)};
}

}  // namespace

TEST_CASE("anchor triple: collinear and coincident points are rejected") {
    CHECK_THROWS_AS(AnchorTriple(Complex(0, 0), Complex(1, 0), Complex(2, 0)), anchor_error);
    CHECK_THROWS_AS(AnchorTriple(Complex(0, 0), Complex(0, 0), Complex(1, 1)), anchor_error);
    CHECK_THROWS_AS(AnchorTriple(Complex(1, 1), Complex(2, 2), Complex(3, 3)), anchor_error);
    CHECK_NOTHROW(AnchorTriple(Complex(1, 0), Complex(-1, 0), Complex(0, 1)));
}

TEST_CASE("distance triple: negative distances are rejected") {
    CHECK_THROWS_AS(DistanceTriple(-1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistanceTriple(1.0, 1.0, -0.5), std::invalid_argument);
    CHECK_NOTHROW(DistanceTriple(0.0, 1.0, 1.0));
}

TEST_CASE("retrieve point: frozen three-circle instance") {
    const AnchorTriple anchors(Complex(1, 0), Complex(-1, 0), Complex(0, 1));
    const Complex z(3, 4);
    // distances from the known point: sqrt(20), sqrt(32), sqrt(18)
    const DistanceTriple dists(std::sqrt(20.0), std::sqrt(32.0), std::sqrt(18.0));
    const Complex got = retrieve_point(anchors, dists);
    CHECK(std::abs(got - z) <= 1e-12);
}

TEST_CASE("retrieve point: zero distance snaps to the anchor") {
    const AnchorTriple anchors(Complex(1, 0), Complex(-1, 0), Complex(0, 1));
    CHECK(retrieve_point(anchors, {0.0, 2.0, std::sqrt(2.0)}) == anchors.z1);
    CHECK(retrieve_point(anchors, {2.0, 0.0, std::sqrt(2.0)}) == anchors.z2);
    CHECK(retrieve_point(anchors, {std::sqrt(2.0), std::sqrt(2.0), 0.0}) == anchors.z3);
}

TEST_CASE("retrieve point: degenerate rotation where both candidates coincide") {
    // z = 1 lies on the line through z1 = 0 and z2 = 2
    const AnchorTriple anchors(Complex(0, 0), Complex(2, 0), Complex(1, 1));
    const Complex z(1, 0);
    const Complex got = retrieve_point(anchors, exact_distances(z, anchors));
    CHECK(std::abs(got - z) <= 1e-12);
}

TEST_CASE("retrieve point: exact recovery over random instances") {
    uint64_t ctr = 0;
    auto next = [&](double lim) {
        const double re = rand_in(-lim, lim, 5, ctr++);
        const double im = rand_in(-lim, lim, 5, ctr++);
        return Complex(re, im);
    };
    int built = 0;
    for (int i = 0; i < 1000; ++i) {
        const Complex z = next(1e3);
        const Complex z1 = next(1e3);
        const Complex z2 = next(1e3);
        const Complex z3 = next(1e3);
        try {
            const AnchorTriple anchors(z1, z2, z3);
            const Complex got = retrieve_point(anchors, exact_distances(z, anchors));
            CHECK(std::abs(got - z) <= 1e-9);
            ++built;
        } catch (const anchor_error&) {
        }
    }
    CHECK(built > 990);
}

TEST_CASE("retrieve point: swapping the first two anchors gives the same result") {
    uint64_t ctr = 0;
    auto next = [&]() {
        const double re = rand_in(-50, 50, 9, ctr++);
        const double im = rand_in(-50, 50, 9, ctr++);
        return Complex(re, im);
    };
    for (int i = 0; i < 200; ++i) {
        const Complex z = next();
        const Complex z1 = next();
        const Complex z2 = next();
        const Complex z3 = next();
        try {
            const AnchorTriple a(z1, z2, z3);
            const AnchorTriple b(z2, z1, z3);
            const Complex ra = retrieve_point(a, exact_distances(z, a));
            const Complex rb = retrieve_point(b, exact_distances(z, b));
            CHECK(std::abs(ra - rb) <= 1e-9);
        } catch (const anchor_error&) {
        }
    }
}

TEST_CASE("retrieve point: infeasible distances are absorbed by clamping") {
    const AnchorTriple anchors(Complex(1, 0), Complex(-1, 0), Complex(0, 1));
    // r1 exceeds r2 + d12: no triangle exists, cosine clamps at -1
    const Complex a = retrieve_point(anchors, {5.0, 1.0, 2.0});
    CHECK(std::isfinite(a.real()));
    CHECK(std::isfinite(a.imag()));
    // r1 far below |d12 - r2|: cosine clamps at +1
    const Complex b = retrieve_point(anchors, {0.1, 5.0, 2.0});
    CHECK(std::isfinite(b.real()));
    CHECK(std::isfinite(b.imag()));
}

TEST_CASE("retrieve point: noise on the distances degrades linearly") {
    const AnchorTriple anchors(Complex(1, 0), Complex(-1, 0), Complex(0, 1));
    const Complex z(3, 4);
    const DistanceTriple exact = exact_distances(z, anchors);
    auto max_err = [&](double eps, uint64_t seed) {
        double m = 0;
        for (int t = 0; t < 300; ++t) {
            const DistanceTriple d(exact.r1 + eps * uniform_pm1(seed, 3 * t),
                                   exact.r2 + eps * uniform_pm1(seed, 3 * t + 1),
                                   exact.r3 + eps * uniform_pm1(seed, 3 * t + 2));
            m = std::max(m, std::abs(retrieve_point(anchors, d) - z));
        }
        return m;
    };
    const double fit = max_err(1e-2, 21) / 1e-2;
    CHECK(max_err(1e-3, 22) <= 1.5 * fit * 1e-3);
    CHECK(max_err(1e-4, 23) <= 1.5 * fit * 1e-4);
}

TEST_CASE("retrieve far field: noiseless dataset reproduces the truth") {
    const SourceModel model({{Shape::rectangle(1, 2, 1, 1.6), Expression::parse("5")}},
                            Expression::parse("1"));
    const WaveNumberGrid grid(0.5, 20.0, 20);
    const std::vector<Complex> taus{Complex(1, 0), Complex(-1, 0), Complex(0, 1)};
    const Dataset ds = synthesize(model, {4, 4}, taus, {Direction{0.0}, Direction{2.1}}, grid);

    const std::vector<FarFieldRecord> rec = retrieve_far_field(ds);
    REQUIRE(rec.size() == 2 * 20);
    for (std::size_t d = 0; d < 2; ++d)
        for (int j = 0; j < 20; ++j) {
            const FarFieldRecord& r = rec[d * 20 + j];
            CHECK(r.direction.angle == ds.directions()[d].angle);
            CHECK(r.k == grid.node(j));
            const Complex truth = ds.truth(d, j);
            CHECK(std::abs(r.value - truth) <= 1e-10 * std::abs(truth));
        }
}

TEST_CASE("retrieve far field: zero source recovers zero") {
    const SourceModel zero({{Shape::rectangle(0, 1, 0, 1), Expression::parse("0")}},
                           Expression::parse("1"));
    const WaveNumberGrid grid(0.5, 20.0, 10);
    const Dataset ds = synthesize(zero, {4, 4}, {Complex(1, 0), Complex(-1, 0), Complex(0, 1)},
                                  {Direction{0.5}}, grid);
    for (const FarFieldRecord& r : retrieve_far_field(ds))
        CHECK(std::abs(r.value) <= 1e-12);
}

TEST_CASE("retrieve far field: tau set requirements") {
    const SourceModel model({{Shape::rectangle(1, 2, 1, 1.6), Expression::parse("5")}},
                            Expression::parse("1"));
    const WaveNumberGrid grid(0.5, 20.0, 5);

    // two strengths are not enough
    const Dataset two = synthesize(model, {4, 4}, {Complex(1, 0), Complex(0, 1)},
                                   {Direction{0.0}}, grid);
    CHECK_THROWS_AS(retrieve_far_field(two), dataset_error);

    // three strengths with collinear differences span no parallelogram
    const Dataset flat = synthesize(model, {4, 4},
                                    {Complex(1, 0), Complex(-1, 0), Complex(3, 0)},
                                    {Direction{0.0}}, grid);
    CHECK_THROWS_AS(retrieve_far_field(flat), dataset_error);
}
