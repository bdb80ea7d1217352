#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ppad/errors.hpp"
#include "ppad/rng.hpp"

namespace ppad {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

inline double cross(const Point2D& o, const Point2D& a, const Point2D& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double distance(const Point2D& a, const Point2D& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

/// Smallest enclosing convex polygon (Andrew's monotone chain).
/// Returns counter-clockwise vertices with collinear interior points removed.
inline std::vector<Point2D> convex_hull(std::vector<Point2D> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2D& a, const Point2D& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2D& a, const Point2D& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    if (pts.size() < 3) throw DegenerateInput("convex hull needs >= 3 distinct points");

    const std::size_t n = pts.size();
    std::vector<Point2D> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) { // lower chain
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) { // upper chain
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1); // last point repeats the first
    if (hull.size() < 3) throw DegenerateInput("input points are collinear");
    return hull;
}

/// Quadratic Bezier point: B(t) = (1-t)^2 P0 + 2t(1-t) C + t^2 P2.
inline Point2D bezier_point(const Point2D& p0, const Point2D& c, const Point2D& p2, double t) {
    const double u = 1.0 - t;
    return {u * u * p0.x + 2.0 * u * t * c.x + t * t * p2.x,
            u * u * p0.y + 2.0 * u * t * c.y + t * t * p2.y};
}

/// Replaces each polygon edge, independently with probability
/// bezier_probability, by a quadratic Bezier whose control point is the edge
/// midpoint displaced along the outward normal by u * control_offset_fraction
/// * edge_length, u uniform in [-1, 1]. Each curve is sampled at
/// ceil(edge_length) + 1 points. The result is a closed polyline (closure
/// implicit, last vertex joins the first). Zero-length edges are dropped.
inline std::vector<Point2D> bezier_edges(const std::vector<Point2D>& hull,
                                         double bezier_probability,
                                         double control_offset_fraction,
                                         Rng& rng) {
    std::vector<Point2D> curve;
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2D& a = hull[i];
        const Point2D& b = hull[(i + 1) % n];
        const double len = distance(a, b);
        if (len == 0.0) continue;
        if (rng.bernoulli(bezier_probability)) {
            // Outward normal of a CCW polygon edge points right of the
            // edge direction.
            const double nx = (b.y - a.y) / len;
            const double ny = -(b.x - a.x) / len;
            const double u = rng.uniform(-1.0, 1.0);
            const double off = u * control_offset_fraction * len;
            const Point2D c{(a.x + b.x) * 0.5 + nx * off, (a.y + b.y) * 0.5 + ny * off};
            const int m = int(std::ceil(len));
            for (int j = 0; j < m; ++j) // skip t = 1: next edge starts there
                curve.push_back(bezier_point(a, c, b, double(j) / m));
        } else {
            curve.push_back(a);
        }
    }
    return curve;
}

} // namespace ppad
