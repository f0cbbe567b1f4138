#include "invsrc/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace invsrc {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

double edge_cross(Point2 a, Point2 b, Point2 p) { return cross(b - a, p - a); }

bool on_segment(Point2 a, Point2 b, Point2 p) {
    if (edge_cross(a, b, p) != 0.0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Segment intersection including endpoints and collinear overlap.
bool segments_touch(Point2 p1, Point2 p2, Point2 p3, Point2 p4) {
    double d1 = edge_cross(p3, p4, p1);
    double d2 = edge_cross(p3, p4, p2);
    double d3 = edge_cross(p1, p2, p3);
    double d4 = edge_cross(p1, p2, p4);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_segment(p3, p4, p1)) return true;
    if (d2 == 0 && on_segment(p3, p4, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, p3)) return true;
    if (d4 == 0 && on_segment(p1, p2, p4)) return true;
    return false;
}

double shoelace_twice(const std::vector<Point2>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2& p = v[i];
        const Point2& q = v[(i + 1) % v.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return a;
}

void validate_polygon(const Polygon& poly) {
    const auto& v = poly.vertices;
    if (v.size() < 3) throw std::invalid_argument("polygon: needs at least 3 vertices");
    for (const Point2& p : v) {
        require_finite(p.x, "polygon vertex");
        require_finite(p.y, "polygon vertex");
    }
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == v[(i + 1) % n]) throw std::invalid_argument("polygon: repeated consecutive vertex");
    }
    // Adjacent edges may only meet at the shared vertex: reject spikes that
    // fold straight back.
    for (std::size_t i = 0; i < n; ++i) {
        Point2 a = v[i], b = v[(i + 1) % n], c = v[(i + 2) % n];
        if (edge_cross(a, b, c) == 0.0 && dot(b - a, c - b) < 0.0)
            throw std::invalid_argument("polygon: degenerate spike at a vertex");
    }
    // Non-adjacent edges must not touch at all.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_touch(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                throw std::invalid_argument("polygon: self-intersecting outline");
        }
    }
    double a2 = shoelace_twice(v);
    if (a2 == 0.0) throw std::invalid_argument("polygon: zero area");
    if (a2 < 0.0) throw std::invalid_argument("polygon: vertices must be counterclockwise");
}

// Even-odd crossing test; boundary handled by the caller.
bool polygon_winding(const std::vector<Point2>& v, Point2 p) {
    bool inside = false;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        Point2 a = v[i], b = v[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x_hit = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_hit) inside = !inside;
        }
    }
    return inside;
}

bool polygon_on_boundary(const std::vector<Point2>& v, Point2 p) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
        if (on_segment(v[i], v[(i + 1) % n], p)) return true;
    return false;
}

}  // namespace

Shape Shape::rectangle(double x_lo, double x_hi, double y_lo, double y_hi) {
    require_finite(x_lo, "rectangle bound");
    require_finite(x_hi, "rectangle bound");
    require_finite(y_lo, "rectangle bound");
    require_finite(y_hi, "rectangle bound");
    if (!(x_lo < x_hi && y_lo < y_hi))
        throw std::invalid_argument("rectangle: bounds must satisfy x_lo < x_hi and y_lo < y_hi");
    return Shape(Rectangle{x_lo, x_hi, y_lo, y_hi});
}

Shape Shape::disc(Point2 center, double radius) {
    require_finite(center.x, "disc center");
    require_finite(center.y, "disc center");
    require_finite(radius, "disc radius");
    if (!(radius > 0.0)) throw std::invalid_argument("disc: radius must be positive");
    return Shape(Disc{center, radius});
}

Shape Shape::polygon(std::vector<Point2> vertices) {
    Polygon p{std::move(vertices)};
    validate_polygon(p);
    return Shape(std::move(p));
}

Shape Shape::difference(Shape outer, Shape hole) {
    return Shape(Difference{std::make_shared<Shape>(std::move(outer)),
                            std::make_shared<Shape>(std::move(hole))});
}

bool Shape::contains(Point2 p) const {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rectangle>) {
                return s.x_lo <= p.x && p.x <= s.x_hi && s.y_lo <= p.y && p.y <= s.y_hi;
            } else if constexpr (std::is_same_v<T, Disc>) {
                Point2 d = p - s.center;
                return dot(d, d) <= s.radius * s.radius;
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return polygon_on_boundary(s.vertices, p) || polygon_winding(s.vertices, p);
            } else {
                return s.outer->contains(p) && !s.hole->interior_contains(p);
            }
        },
        v_);
}

bool Shape::interior_contains(Point2 p) const {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rectangle>) {
                return s.x_lo < p.x && p.x < s.x_hi && s.y_lo < p.y && p.y < s.y_hi;
            } else if constexpr (std::is_same_v<T, Disc>) {
                Point2 d = p - s.center;
                return dot(d, d) < s.radius * s.radius;
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return !polygon_on_boundary(s.vertices, p) && polygon_winding(s.vertices, p);
            } else {
                return s.outer->interior_contains(p) && !s.hole->contains(p);
            }
        },
        v_);
}

Interval Shape::project(Direction d) const {
    const Point2 u = d.unit();
    return std::visit(
        [&](const auto& s) -> Interval {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rectangle>) {
                double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                for (double x : {s.x_lo, s.x_hi})
                    for (double y : {s.y_lo, s.y_hi}) {
                        double t = dot(u, {x, y});
                        lo = std::min(lo, t);
                        hi = std::max(hi, t);
                    }
                return {lo, hi};
            } else if constexpr (std::is_same_v<T, Disc>) {
                double c = dot(u, s.center);
                return {c - s.radius, c + s.radius};
            } else if constexpr (std::is_same_v<T, Polygon>) {
                double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                for (const Point2& p : s.vertices) {
                    double t = dot(u, p);
                    lo = std::min(lo, t);
                    hi = std::max(hi, t);
                }
                return {lo, hi};
            } else {
                return s.outer->project(d);
            }
        },
        v_);
}

BoundingBox Shape::bounding_box() const {
    return std::visit(
        [&](const auto& s) -> BoundingBox {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rectangle>) {
                return {s.x_lo, s.x_hi, s.y_lo, s.y_hi};
            } else if constexpr (std::is_same_v<T, Disc>) {
                return {s.center.x - s.radius, s.center.x + s.radius, s.center.y - s.radius,
                        s.center.y + s.radius};
            } else if constexpr (std::is_same_v<T, Polygon>) {
                BoundingBox b{s.vertices[0].x, s.vertices[0].x, s.vertices[0].y, s.vertices[0].y};
                for (const Point2& p : s.vertices) {
                    b.x_lo = std::min(b.x_lo, p.x);
                    b.x_hi = std::max(b.x_hi, p.x);
                    b.y_lo = std::min(b.y_lo, p.y);
                    b.y_hi = std::max(b.y_hi, p.y);
                }
                return b;
            } else {
                return s.outer->bounding_box();
            }
        },
        v_);
}

Shape Shape::translated(Point2 h) const {
    return std::visit(
        [&](const auto& s) -> Shape {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rectangle>) {
                return Shape(Rectangle{s.x_lo + h.x, s.x_hi + h.x, s.y_lo + h.y, s.y_hi + h.y});
            } else if constexpr (std::is_same_v<T, Disc>) {
                return Shape(Disc{s.center + h, s.radius});
            } else if constexpr (std::is_same_v<T, Polygon>) {
                Polygon out = s;
                for (Point2& p : out.vertices) p = p + h;
                return Shape(std::move(out));
            } else {
                return Shape(Difference{std::make_shared<Shape>(s.outer->translated(h)),
                                        std::make_shared<Shape>(s.hole->translated(h))});
            }
        },
        v_);
}

SourceModel::SourceModel(std::vector<SourceComponent> components, Expression g)
    : components_(std::move(components)), g_(std::move(g)) {
    if (components_.empty()) throw std::invalid_argument("source model: needs at least one component");
    for (const SourceComponent& c : components_) {
        if (!c.profile.uses_only(kVarX | kVarY))
            throw std::invalid_argument("source model: profile '" + c.profile.text() +
                                        "' may only use x and y");
    }
    if (!g_.uses_only(kVarK))
        throw std::invalid_argument("source model: spectral factor '" + g_.text() +
                                    "' may only use k");
    for (std::size_t i = 0; i < components_.size(); ++i) {
        for (std::size_t j = i + 1; j < components_.size(); ++j) {
            if (components_[i].shape.bounding_box().intersects(components_[j].shape.bounding_box()))
                throw std::invalid_argument(
                    "source model: component bounding boxes must be pairwise disjoint");
        }
    }
}

Complex SourceModel::eval_source(Point2 p, double k) const {
    if (!(k > 0.0)) throw std::invalid_argument("eval_source: k must be positive");
    for (const SourceComponent& c : components_) {
        if (c.shape.contains(p)) return Complex(c.profile.eval(p.x, p.y, 0.0) * g_.eval(0.0, 0.0, k), 0.0);
    }
    return Complex(0.0, 0.0);
}

Interval SourceModel::strip_hull(Direction d) const {
    Interval hull = components_.front().shape.project(d);
    for (std::size_t i = 1; i < components_.size(); ++i) {
        Interval s = components_[i].shape.project(d);
        hull.lo = std::min(hull.lo, s.lo);
        hull.hi = std::max(hull.hi, s.hi);
    }
    return hull;
}

bool SourceModel::contains(Point2 p) const {
    for (const SourceComponent& c : components_)
        if (c.shape.contains(p)) return true;
    return false;
}

SourceModel SourceModel::translated(Point2 h) const {
    std::vector<SourceComponent> moved;
    moved.reserve(components_.size());
    for (const SourceComponent& c : components_)
        moved.push_back({c.shape.translated(h), c.profile.shifted_xy(h.x, h.y)});
    return SourceModel(std::move(moved), g_);
}

void require_outside_support(const SourceModel& model, Point2 z0) {
    if (model.contains(z0))
        throw std::invalid_argument("reference source: z0 must lie outside the source support");
}

}  // namespace invsrc
