#include "invsrc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "invsrc/errors.hpp"

namespace invsrc {

namespace {

// Newton iteration on the Legendre polynomial, symmetric pair fill.
GaussLegendreRule compute_gauss_legendre(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one more polish step, then done
                p0 = 1.0;
                p1 = x;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                x -= p1 / dp;
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;  // ascending order
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    }
    return rule;
}

std::map<int, GaussLegendreRule>& rule_cache() {
    static std::map<int, GaussLegendreRule> cache;
    return cache;
}
std::mutex rule_mutex;

struct Accum {
    Complex integral{0.0, 0.0};
    double mass = 0.0;  // sum of |weight * f|, the non-oscillatory scale
};

int scaled(int base, double factor) { return int(std::ceil(base * factor)); }

Accum integrate_shape(const Shape& shape, const Expression& f, Point2 u, double k, double factor);

Accum integrate_rectangle(const Rectangle& r, const Expression& f, Point2 u, double k,
                          double factor) {
    const int nx = scaled(axis_node_count(k, r.x_hi - r.x_lo), factor);
    const int ny = scaled(axis_node_count(k, r.y_hi - r.y_lo), factor);
    const GaussLegendreRule& gx = gauss_legendre(nx);
    const GaussLegendreRule& gy = gauss_legendre(ny);
    const double cx = 0.5 * (r.x_lo + r.x_hi), hx = 0.5 * (r.x_hi - r.x_lo);
    const double cy = 0.5 * (r.y_lo + r.y_hi), hy = 0.5 * (r.y_hi - r.y_lo);

    // The phase splits over the axes; build per-axis weighted phase factors
    // so only the profile is evaluated per 2D node.
    std::vector<Complex> px(nx), py(ny);
    std::vector<double> xs(nx), ys(ny);
    for (int i = 0; i < nx; ++i) {
        xs[i] = cx + hx * gx.nodes[i];
        px[i] = (gx.weights[i] * hx) * std::polar(1.0, -k * u.x * xs[i]);
    }
    for (int j = 0; j < ny; ++j) {
        ys[j] = cy + hy * gy.nodes[j];
        py[j] = (gy.weights[j] * hy) * std::polar(1.0, -k * u.y * ys[j]);
    }
    Accum acc;
    for (int j = 0; j < ny; ++j) {
        Complex row{0.0, 0.0};
        double row_mass = 0.0;
        for (int i = 0; i < nx; ++i) {
            const double fv = f.eval(xs[i], ys[j], 0.0);
            row += fv * px[i];
            row_mass += std::abs(fv) * gx.weights[i] * hx;
        }
        acc.integral += py[j] * row;
        acc.mass += row_mass * gy.weights[j] * hy;
    }
    return acc;
}

Accum integrate_disc(const Disc& d, const Expression& f, Point2 u, double k, double factor) {
    const int nr = scaled(axis_node_count(k, d.radius), factor);
    const int nt = scaled(axis_node_count(k, 2.0 * M_PI * d.radius), factor);
    const GaussLegendreRule& gr = gauss_legendre(nr);
    const double wt = 2.0 * M_PI / nt;
    Accum acc;
    for (int i = 0; i < nr; ++i) {
        const double r = 0.5 * d.radius * (gr.nodes[i] + 1.0);
        const double wr = 0.5 * d.radius * gr.weights[i] * r;  // includes Jacobian r
        for (int m = 0; m < nt; ++m) {
            const double th = wt * (m + 0.5);
            const Point2 p{d.center.x + r * std::cos(th), d.center.y + r * std::sin(th)};
            const double fv = f.eval(p.x, p.y, 0.0);
            acc.integral += (wr * wt) * fv * std::polar(1.0, -k * dot(u, p));
            acc.mass += wr * wt * std::abs(fv);
        }
    }
    return acc;
}

// Signed centroid fan: each polygon edge spans a triangle with the centroid;
// collapsed (u,v) coordinates turn it into a tensor integral.  Signed
// Jacobians make the decomposition exact for any simple outline, convex or
// not.
Accum integrate_polygon(const Polygon& poly, const Expression& f, Point2 u, double k,
                        double factor) {
    const std::size_t n = poly.vertices.size();
    Point2 c{0.0, 0.0};
    for (const Point2& p : poly.vertices) c = c + p;
    c = (1.0 / double(n)) * c;

    Accum acc;
    for (std::size_t e = 0; e < n; ++e) {
        const Point2 a = poly.vertices[e];
        const Point2 b = poly.vertices[(e + 1) % n];
        const Point2 ea = a - c;       // centroid -> first vertex
        const Point2 eb = b - a;       // chord
        const double jac = cross(ea, b - c);  // signed, twice the area

        const double len_u = std::max(std::hypot(ea.x, ea.y), std::hypot(b.x - c.x, b.y - c.y));
        const double len_v = std::hypot(eb.x, eb.y);
        const int nu = scaled(axis_node_count(k, len_u), factor);
        const int nv = scaled(axis_node_count(k, len_v), factor);
        const GaussLegendreRule& gu = gauss_legendre(nu);
        const GaussLegendreRule& gv = gauss_legendre(nv);

        for (int iv = 0; iv < nv; ++iv) {
            const double v = 0.5 * (gv.nodes[iv] + 1.0);
            const double wv = 0.5 * gv.weights[iv];
            const Point2 dir = ea + v * eb;  // centroid -> point on chord
            for (int iu = 0; iu < nu; ++iu) {
                const double s = 0.5 * (gu.nodes[iu] + 1.0);
                const double ws = 0.5 * gu.weights[iu];
                const Point2 p = c + s * dir;
                const double w = ws * wv * s * jac;
                const double fv = f.eval(p.x, p.y, 0.0);
                acc.integral += w * fv * std::polar(1.0, -k * dot(u, p));
                acc.mass += std::abs(w * fv);
            }
        }
    }
    return acc;
}

Accum integrate_shape(const Shape& shape, const Expression& f, Point2 u, double k, double factor) {
    return std::visit(
        [&](const auto& s) -> Accum {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rectangle>) {
                return integrate_rectangle(s, f, u, k, factor);
            } else if constexpr (std::is_same_v<T, Disc>) {
                return integrate_disc(s, f, u, k, factor);
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return integrate_polygon(s, f, u, k, factor);
            } else {
                // Outer minus hole; assumes the hole sits inside the outer
                // region, which the shape algebra uses it for.
                Accum outer = integrate_shape(*s.outer, f, u, k, factor);
                Accum hole = integrate_shape(*s.hole, f, u, k, factor);
                return {outer.integral - hole.integral, outer.mass + hole.mass};
            }
        },
        shape.node());
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    std::lock_guard<std::mutex> lock(rule_mutex);
    auto& cache = rule_cache();
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

int axis_node_count(double k, double len) {
    return std::max(8, int(std::ceil(3.0 * k * len)));
}

Complex shape_farfield_integral(const Shape& shape, const Expression& f, Direction d, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("shape_farfield_integral: k must be positive");
    const Point2 u = d.unit();
    constexpr double rel_tol = 1e-9;

    const Accum base = integrate_shape(shape, f, u, k, 1.0);
    const Accum fine = integrate_shape(shape, f, u, k, 1.5);
    // Relative difference against the finer pass, with a floor tied to the
    // non-oscillatory mass so exact zeros and heavy cancellation do not spin
    // the refinement forever.
    const double floor = 1e-14 * (1.0 + base.mass);
    auto rel = [&](Complex coarse, Complex refined) {
        return std::abs(refined - coarse) / std::max(std::abs(refined), floor);
    };
    double achieved = rel(base.integral, fine.integral);
    if (achieved <= rel_tol) return fine.integral;

    const Accum finest = integrate_shape(shape, f, u, k, 2.25);
    achieved = rel(fine.integral, finest.integral);
    if (achieved <= rel_tol) return finest.integral;

    throw quadrature_error(
        "far-field quadrature did not converge (relative difference " + std::to_string(achieved) +
            " after refinement)",
        achieved);
}

}  // namespace invsrc
