#pragma once

#include <complex>
#include <memory>
#include <variant>
#include <vector>

#include "invsrc/expression.hpp"

namespace invsrc {

using Complex = std::complex<double>;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

// Observation direction on the unit circle, stored as an angle in radians.
struct Direction {
    double angle = 0.0;
    Point2 unit() const { return {std::cos(angle), std::sin(angle)}; }
    // Counterclockwise perpendicular of unit().
    Point2 perp() const { return {-std::sin(angle), std::cos(angle)}; }
};

// Closed interval of projections onto a direction.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct BoundingBox {
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    bool intersects(const BoundingBox& o) const {
        return x_lo <= o.x_hi && o.x_lo <= x_hi && y_lo <= o.y_hi && o.y_lo <= y_hi;
    }
};

class Shape;

struct Rectangle {
    double x_lo, x_hi, y_lo, y_hi;
};

struct Disc {
    Point2 center;
    double radius;
};

// Simple polygon, vertices in counterclockwise order.
struct Polygon {
    std::vector<Point2> vertices;
};

// Region of `outer` with the interior of `hole` removed.  The resulting set
// is closed; points on the hole boundary belong to the difference.
struct Difference {
    std::shared_ptr<const Shape> outer;
    std::shared_ptr<const Shape> hole;
};

// Immutable planar support region.  All shapes are closed: boundary points
// are members.  Construction validates geometric invariants and throws
// std::invalid_argument on violations.
class Shape {
public:
    static Shape rectangle(double x_lo, double x_hi, double y_lo, double y_hi);
    static Shape disc(Point2 center, double radius);
    static Shape polygon(std::vector<Point2> vertices);
    static Shape difference(Shape outer, Shape hole);

    bool contains(Point2 p) const;           // closed membership
    bool interior_contains(Point2 p) const;  // strict membership

    // Exact projection interval onto the direction; for a difference this is
    // the outer shape's interval (the removed part cannot widen it).
    Interval project(Direction d) const;

    BoundingBox bounding_box() const;
    Shape translated(Point2 h) const;

    const std::variant<Rectangle, Disc, Polygon, Difference>& node() const { return v_; }

private:
    explicit Shape(std::variant<Rectangle, Disc, Polygon, Difference> v) : v_(std::move(v)) {}
    std::variant<Rectangle, Disc, Polygon, Difference> v_;
};

struct SourceComponent {
    Shape shape;
    Expression profile;  // spatial factor, variables x,y only
};

// Compactly supported source with a shared spectral factor g(k): the source
// value at p with wavenumber k is profile_m(p) * g(k) on component m and 0
// outside every component.  Component shapes must have pairwise disjoint
// bounding boxes, which is how well-separatedness is enforced.
class SourceModel {
public:
    SourceModel(std::vector<SourceComponent> components, Expression g);

    Complex eval_source(Point2 p, double k) const;

    // Union of per-component projection intervals: the tightest slab
    // orthogonal to d containing the whole support.
    Interval strip_hull(Direction d) const;

    bool contains(Point2 p) const;
    SourceModel translated(Point2 h) const;

    const std::vector<SourceComponent>& components() const { return components_; }
    const Expression& g() const { return g_; }

private:
    std::vector<SourceComponent> components_;
    Expression g_;
};

// Known point source placed at z0 with amplitude tau (tau = 0 disables it).
struct ReferenceSource {
    Point2 z0;
    Complex tau;
};

// Throws std::invalid_argument if z0 lies inside (or on the boundary of) any
// component of the model.
void require_outside_support(const SourceModel& model, Point2 z0);

}  // namespace invsrc
