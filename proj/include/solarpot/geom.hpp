#pragma once

// Planar geometry kernel. Coordinates are meters in a locally projected frame
// (x east, y north). Rings are stored open (no repeated closing vertex).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

// Boost 1.7x rescales buffer input to integers, costing ~1e-6 m of accuracy.
#ifndef BOOST_GEOMETRY_NO_ROBUSTNESS
#define BOOST_GEOMETRY_NO_ROBUSTNESS
#endif
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>

#include "solarpot/error.hpp"

namespace solarpot::geom {

/// Coincidence tolerance for points and segments, in meters.
inline constexpr double kTolerance = 1e-6;

inline constexpr double kPi = std::numbers::pi;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into [0, period).
inline double wrap_angle(double deg, double period = 360.0) {
    double a = std::fmod(deg, period);
    if (a < 0.0) a += period;
    if (a >= period) a -= period;
    return a;
}

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
    friend Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
    friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Unit vector pointing at a compass bearing (degrees clockwise from north).
inline Point2 compass_direction(double azimuth_deg) {
    const double a = deg2rad(azimuth_deg);
    return {std::sin(a), std::cos(a)};
}

using Ring = std::vector<Point2>;

struct Polygon2 {
    Ring exterior;
    std::vector<Ring> holes;
};

struct Segment2 {
    Point2 a;
    Point2 b;
};

struct Box2 {
    Point2 min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point2 max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

    void extend(Point2 p) {
        min.x = std::min(min.x, p.x);
        min.y = std::min(min.y, p.y);
        max.x = std::max(max.x, p.x);
        max.y = std::max(max.y, p.y);
    }
    bool empty() const { return min.x > max.x || min.y > max.y; }
    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    Point2 center() const { return {(min.x + max.x) / 2.0, (min.y + max.y) / 2.0}; }
    Box2 expanded(double d) const { return {{min.x - d, min.y - d}, {max.x + d, max.y + d}}; }
    bool intersects(const Box2& o) const {
        return min.x <= o.max.x && o.min.x <= max.x && min.y <= o.max.y && o.min.y <= max.y;
    }
    /// Euclidean distance from a point to the box (0 inside).
    double distance_to(Point2 p) const {
        const double dx = std::max({min.x - p.x, 0.0, p.x - max.x});
        const double dy = std::max({min.y - p.y, 0.0, p.y - max.y});
        return std::hypot(dx, dy);
    }
};

/// Rectangle with its first axis at angle_deg (counter-clockwise from +x).
/// Also the result type of oriented_bbox, where angle_deg lies in [0, 90).
struct OrientedRect {
    Point2 center;
    double angle_deg = 0.0;
    double half_extent_u = 0.0;
    double half_extent_v = 0.0;

    Point2 axis_u() const { return {std::cos(deg2rad(angle_deg)), std::sin(deg2rad(angle_deg))}; }
    Point2 axis_v() const { return {-std::sin(deg2rad(angle_deg)), std::cos(deg2rad(angle_deg))}; }
    double area() const { return 4.0 * half_extent_u * half_extent_v; }

    /// Counter-clockwise corners.
    Ring corners() const {
        const Point2 u = axis_u() * half_extent_u;
        const Point2 v = axis_v() * half_extent_v;
        return {center - u - v, center + u - v, center + u + v, center - u + v};
    }
    Polygon2 to_polygon() const { return {corners(), {}}; }
};

using ObbFit = OrientedRect;

inline double signed_area(const Ring& ring) {
    const std::size_t n = ring.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += cross(ring[i], ring[(i + 1) % n]);
    return acc / 2.0;
}

/// Shoelace area of the exterior minus the holes.
inline double polygon_area(const Polygon2& p) {
    if (p.exterior.size() < 3) throw GeometryError("polygon ring has fewer than 3 vertices");
    double area = std::abs(signed_area(p.exterior));
    for (const Ring& h : p.holes) {
        if (h.size() < 3) throw GeometryError("hole ring has fewer than 3 vertices");
        area -= std::abs(signed_area(h));
    }
    if (!(area > 0.0)) throw GeometryError("polygon has non-positive area");
    return area;
}

inline Box2 bounds(const Ring& ring) {
    Box2 b;
    for (Point2 p : ring) b.extend(p);
    return b;
}

inline Box2 bounds(const Polygon2& p) { return bounds(p.exterior); }

inline Point2 centroid(const Ring& ring) {
    const std::size_t n = ring.size();
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = ring[i], q = ring[(i + 1) % n];
        const double c = cross(p, q);
        a += c;
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    if (std::abs(a) < 1e-300) return bounds(ring).center();
    return {cx / (3.0 * a), cy / (3.0 * a)};
}

/// Area-weighted centroid, holes subtracted.
inline Point2 centroid(const Polygon2& p) {
    double total = std::abs(signed_area(p.exterior));
    Point2 acc = centroid(p.exterior) * total;
    for (const Ring& h : p.holes) {
        const double ha = std::abs(signed_area(h));
        acc = acc - centroid(h) * ha;
        total -= ha;
    }
    if (total <= 0.0) return centroid(p.exterior);
    return acc * (1.0 / total);
}

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + ab * t);
}

/// True when the closed segments ab and cd come within kTolerance of each other.
inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double d1 = cross(d - c, a - c);
    const double d2 = cross(d - c, b - c);
    const double d3 = cross(b - a, c - a);
    const double d4 = cross(b - a, d - a);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    return point_segment_distance(a, c, d) <= kTolerance || point_segment_distance(b, c, d) <= kTolerance ||
           point_segment_distance(c, a, b) <= kTolerance || point_segment_distance(d, a, b) <= kTolerance;
}

enum class Location { inside, boundary, outside };

inline Location locate(Point2 p, const Ring& ring) {
    const std::size_t n = ring.size();
    bool in = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2 a = ring[j], b = ring[i];
        if (point_segment_distance(p, a, b) <= kTolerance) return Location::boundary;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) in = !in;
        }
    }
    return in ? Location::inside : Location::outside;
}

inline Location locate(Point2 p, const Polygon2& poly) {
    const Location ext = locate(p, poly.exterior);
    if (ext != Location::inside) return ext;
    for (const Ring& h : poly.holes) {
        const Location l = locate(p, h);
        if (l == Location::inside) return Location::outside;
        if (l == Location::boundary) return Location::boundary;
    }
    return Location::inside;
}

namespace detail {

inline bool ring_is_simple(const Ring& ring) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = ring[i], b = ring[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            // adjacent edges share a vertex by construction
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(a, b, ring[j], ring[(j + 1) % n])) return false;
        }
    }
    return true;
}

inline Ring clean_ring(Ring ring) {
    if (ring.size() >= 2 && distance(ring.front(), ring.back()) <= kTolerance) ring.pop_back();
    Ring out;
    out.reserve(ring.size());
    for (Point2 p : ring) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("non-finite coordinate");
        if (out.empty() || distance(out.back(), p) > kTolerance) out.push_back(p);
    }
    while (out.size() >= 2 && distance(out.front(), out.back()) <= kTolerance) out.pop_back();
    return out;
}

inline void check_ring(const Ring& ring, const char* what) {
    if (ring.size() < 3) throw GeometryError(std::string(what) + " ring has fewer than 3 vertices");
    for (Point2 p : ring)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("non-finite coordinate");
    if (std::abs(signed_area(ring)) <= 0.0) throw GeometryError(std::string(what) + " ring has zero area");
    if (!ring_is_simple(ring)) throw GeometryError(std::string(what) + " ring is self-intersecting");
}

}  // namespace detail

/// Full validity check: simple rings, orientation, holes strictly inside.
inline void validate(const Polygon2& p) {
    detail::check_ring(p.exterior, "exterior");
    if (signed_area(p.exterior) <= 0.0) throw GeometryError("exterior ring is not counter-clockwise");
    for (const Ring& h : p.holes) {
        detail::check_ring(h, "hole");
        if (signed_area(h) >= 0.0) throw GeometryError("hole ring is not clockwise");
        for (Point2 v : h)
            if (locate(v, p.exterior) != Location::inside) throw GeometryError("hole is not strictly inside exterior");
        for (std::size_t i = 0; i < h.size(); ++i)
            for (std::size_t j = 0; j < p.exterior.size(); ++j)
                if (segments_intersect(h[i], h[(i + 1) % h.size()], p.exterior[j],
                                       p.exterior[(j + 1) % p.exterior.size()]))
                    throw GeometryError("hole touches exterior");
    }
    polygon_area(p);
}

/// Drops closing/duplicate vertices, fixes ring orientation and validates.
inline Polygon2 make_polygon(Ring exterior, std::vector<Ring> holes = {}) {
    Polygon2 p;
    p.exterior = detail::clean_ring(std::move(exterior));
    if (p.exterior.size() >= 3 && signed_area(p.exterior) < 0.0) std::reverse(p.exterior.begin(), p.exterior.end());
    for (Ring& h : holes) {
        Ring r = detail::clean_ring(std::move(h));
        if (r.size() >= 3 && signed_area(r) > 0.0) std::reverse(r.begin(), r.end());
        p.holes.push_back(std::move(r));
    }
    validate(p);
    return p;
}

/// Andrew's monotone chain; returns a counter-clockwise hull without collinear points.
inline Ring convex_hull(std::span<const Point2> points) {
    Ring pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    Ring hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i - 1] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);
    return hull;
}

/// Minimum-area oriented bounding box. The optimal box is flush with a hull
/// edge, so every hull edge direction is tried. Near-equal areas (1e-9
/// relative) prefer the longer supporting edge, then the earlier edge.
inline ObbFit oriented_bbox(const Polygon2& p) {
    const Ring hull = convex_hull(p.exterior);
    if (hull.size() < 3 || signed_area(hull) <= kTolerance * kTolerance)
        throw GeometryError("oriented_bbox: degenerate polygon");

    double best_area = std::numeric_limits<double>::infinity();
    double best_len = 0.0;
    Point2 best_dir{1.0, 0.0};
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point2 e = hull[(i + 1) % hull.size()] - hull[i];
        const double len = norm(e);
        if (len <= kTolerance) continue;
        const Point2 u = e * (1.0 / len);
        const Point2 v{-u.y, u.x};
        double umin = std::numeric_limits<double>::infinity(), umax = -umin, vmin = umin, vmax = -umin;
        for (Point2 q : hull) {
            umin = std::min(umin, dot(q, u));
            umax = std::max(umax, dot(q, u));
            vmin = std::min(vmin, dot(q, v));
            vmax = std::max(vmax, dot(q, v));
        }
        const double area = (umax - umin) * (vmax - vmin);
        const double tol = 1e-9 * std::max(area, best_area == std::numeric_limits<double>::infinity() ? area : best_area);
        if (area < best_area - tol || (std::abs(area - best_area) <= tol && len > best_len * (1.0 + 1e-9))) {
            best_area = area;
            best_len = len;
            best_dir = u;
        }
    }

    double angle = wrap_angle(rad2deg(std::atan2(best_dir.y, best_dir.x)), 90.0);
    if (angle >= 90.0 - 1e-9) angle = 0.0;
    ObbFit fit;
    fit.angle_deg = angle;
    const Point2 u = fit.axis_u(), v = fit.axis_v();
    double umin = std::numeric_limits<double>::infinity(), umax = -umin, vmin = umin, vmax = -umin;
    for (Point2 q : hull) {
        umin = std::min(umin, dot(q, u));
        umax = std::max(umax, dot(q, u));
        vmin = std::min(vmin, dot(q, v));
        vmax = std::max(vmax, dot(q, v));
    }
    fit.center = u * ((umin + umax) / 2.0) + v * ((vmin + vmax) / 2.0);
    fit.half_extent_u = (umax - umin) / 2.0;
    fit.half_extent_v = (vmax - vmin) / 2.0;
    return fit;
}

/// Counter-clockwise rotation about origin.
inline Point2 rotate_point(Point2 p, double angle_deg, Point2 origin = {}) {
    const double a = deg2rad(angle_deg);
    const double c = std::cos(a), s = std::sin(a);
    const Point2 d = p - origin;
    return {origin.x + c * d.x - s * d.y, origin.y + s * d.x + c * d.y};
}

inline Ring rotate_ring(const Ring& ring, double angle_deg, Point2 origin) {
    Ring out;
    out.reserve(ring.size());
    for (Point2 p : ring) out.push_back(rotate_point(p, angle_deg, origin));
    return out;
}

inline Polygon2 rotate_frame(const Polygon2& p, double angle_deg, Point2 origin) {
    if (angle_deg == 0.0) return p;
    Polygon2 out;
    out.exterior = rotate_ring(p.exterior, angle_deg, origin);
    for (const Ring& h : p.holes) out.holes.push_back(rotate_ring(h, angle_deg, origin));
    return out;
}

inline Polygon2 translate(const Polygon2& p, Point2 offset) {
    Polygon2 out = p;
    for (Point2& q : out.exterior) q = q + offset;
    for (Ring& h : out.holes)
        for (Point2& q : h) q = q + offset;
    return out;
}

namespace detail {

template <class Fn>
void for_each_edge(const Polygon2& p, Fn&& fn) {
    auto ring_edges = [&](const Ring& r) {
        for (std::size_t i = 0; i < r.size(); ++i) fn(r[i], r[(i + 1) % r.size()]);
    };
    ring_edges(p.exterior);
    for (const Ring& h : p.holes) ring_edges(h);
}

/// Separating-axis test for two rectangles; touching counts as intersecting.
inline bool rects_intersect(const OrientedRect& a, const OrientedRect& b) {
    const Ring ca = a.corners(), cb = b.corners();
    const std::array<Point2, 4> axes{a.axis_u(), a.axis_v(), b.axis_u(), b.axis_v()};
    for (Point2 ax : axes) {
        double amin = std::numeric_limits<double>::infinity(), amax = -amin, bmin = amin, bmax = -amin;
        for (Point2 p : ca) {
            amin = std::min(amin, dot(p, ax));
            amax = std::max(amax, dot(p, ax));
        }
        for (Point2 p : cb) {
            bmin = std::min(bmin, dot(p, ax));
            bmax = std::max(bmax, dot(p, ax));
        }
        if (amax < bmin - kTolerance || bmax < amin - kTolerance) return false;
    }
    return true;
}

}  // namespace detail

/// True iff the two shapes share any point (interior or boundary).
inline bool intersects(const Polygon2& a, const Polygon2& b) {
    if (!bounds(a).expanded(kTolerance).intersects(bounds(b))) return false;
    bool hit = false;
    detail::for_each_edge(a, [&](Point2 p, Point2 q) {
        if (hit) return;
        const Box2 eb = bounds(Ring{p, q}).expanded(kTolerance);
        detail::for_each_edge(b, [&](Point2 r, Point2 s) {
            if (hit) return;
            if (!eb.intersects(bounds(Ring{r, s}))) return;
            if (segments_intersect(p, q, r, s)) hit = true;
        });
    });
    if (hit) return true;
    // No boundary contact: shapes are disjoint or one lies inside the other.
    if (locate(a.exterior.front(), b) != Location::outside) return true;
    if (locate(b.exterior.front(), a) != Location::outside) return true;
    return false;
}

inline bool intersects(const OrientedRect& a, const OrientedRect& b) { return detail::rects_intersect(a, b); }
inline bool intersects(const OrientedRect& a, const Polygon2& b) { return intersects(a.to_polygon(), b); }
inline bool intersects(const Polygon2& a, const OrientedRect& b) { return intersects(a, b.to_polygon()); }

/// True when the rectangle lies in the closed region of poly (contact with
/// the boundary allowed, crossing it not).
inline bool contains(const Polygon2& poly, const OrientedRect& r) {
    OrientedRect shrunk = r;
    shrunk.half_extent_u = std::max(r.half_extent_u - 2.0 * kTolerance, 0.0);
    shrunk.half_extent_v = std::max(r.half_extent_v - 2.0 * kTolerance, 0.0);
    const Ring c = shrunk.corners();
    bool crossed = false;
    detail::for_each_edge(poly, [&](Point2 p, Point2 q) {
        if (crossed) return;
        for (std::size_t i = 0; i < 4 && !crossed; ++i)
            if (segments_intersect(c[i], c[(i + 1) % 4], p, q)) crossed = true;
    });
    if (crossed) return false;
    // a hole swallowed whole by the rectangle crosses none of its edges
    const Point2 u = shrunk.axis_u(), v = shrunk.axis_v();
    for (const Ring& h : poly.holes) {
        const Point2 d = h.front() - shrunk.center;
        if (std::abs(dot(d, u)) < shrunk.half_extent_u && std::abs(dot(d, v)) < shrunk.half_extent_v) return false;
    }
    return locate(r.center, poly) == Location::inside;
}

/// Sutherland-Hodgman clip of a ring against a convex counter-clockwise ring.
inline Ring clip_convex(const Ring& subject, const Ring& convex) {
    Ring out = subject;
    const std::size_t n = convex.size();
    for (std::size_t i = 0; i < n && !out.empty(); ++i) {
        const Point2 a = convex[i], b = convex[(i + 1) % n];
        const Ring in = std::move(out);
        out.clear();
        auto side = [&](Point2 p) { return cross(b - a, p - a); };
        for (std::size_t j = 0; j < in.size(); ++j) {
            const Point2 p = in[j], q = in[(j + 1) % in.size()];
            const double sp = side(p), sq = side(q);
            if (sp >= 0) out.push_back(p);
            if ((sp >= 0) != (sq >= 0)) {
                const double t = sp / (sp - sq);
                out.push_back(p + (q - p) * t);
            }
        }
    }
    return out;
}

/// Overlap area of two convex rings.
inline double convex_overlap_area(const Ring& a, const Ring& b) {
    Ring ccw_b = b;
    if (signed_area(ccw_b) < 0) std::reverse(ccw_b.begin(), ccw_b.end());
    const Ring clipped = clip_convex(a, ccw_b);
    return clipped.size() < 3 ? 0.0 : std::abs(signed_area(clipped));
}

namespace detail {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint, false, true>;
using BgMultiPolygon = bg::model::multi_polygon<BgPolygon>;

inline BgPolygon to_boost(const Polygon2& p) {
    BgPolygon out;
    for (Point2 q : p.exterior) out.outer().emplace_back(q.x, q.y);
    out.outer().emplace_back(p.exterior.front().x, p.exterior.front().y);
    for (const Ring& h : p.holes) {
        out.inners().emplace_back();
        for (Point2 q : h) out.inners().back().emplace_back(q.x, q.y);
        out.inners().back().emplace_back(h.front().x, h.front().y);
    }
    bg::correct(out);
    return out;
}

inline Ring from_boost_ring(const auto& ring) {
    Ring out;
    for (const auto& q : ring) out.push_back({q.x(), q.y()});
    return clean_ring(std::move(out));
}

}  // namespace detail

/// Inward offset by margin with mitred joins. Erosion can split a shape into
/// several parts or annihilate it entirely.
inline std::vector<Polygon2> erode(const Polygon2& p, double margin) {
    if (!(margin >= 0.0) || !std::isfinite(margin)) throw ArgumentError("erode: margin must be >= 0");
    if (margin == 0.0) return {p};
    namespace bg = boost::geometry;
    namespace bs = boost::geometry::strategy::buffer;
    detail::BgMultiPolygon in;
    in.push_back(detail::to_boost(p));
    detail::BgMultiPolygon result;
    bg::buffer(in, result, bs::distance_symmetric<double>(-margin), bs::side_straight(), bs::join_miter(),
               bs::end_flat(), bs::point_square());
    std::vector<Polygon2> out;
    for (const auto& bp : result) {
        Polygon2 q;
        q.exterior = detail::from_boost_ring(bp.outer());
        if (q.exterior.size() < 3) continue;
        if (signed_area(q.exterior) < 0) std::reverse(q.exterior.begin(), q.exterior.end());
        for (const auto& inner : bp.inners()) {
            Ring h = detail::from_boost_ring(inner);
            if (h.size() < 3) continue;
            if (signed_area(h) > 0) std::reverse(h.begin(), h.end());
            q.holes.push_back(std::move(h));
        }
        double area = std::abs(signed_area(q.exterior));
        for (const Ring& h : q.holes) area -= std::abs(signed_area(h));
        if (area > 1e-10) out.push_back(std::move(q));
    }
    // Deterministic order: by lower-left corner of each part.
    std::sort(out.begin(), out.end(), [](const Polygon2& a, const Polygon2& b) {
        const Box2 ba = bounds(a), bb = bounds(b);
        return ba.min.x < bb.min.x || (ba.min.x == bb.min.x && ba.min.y < bb.min.y);
    });
    return out;
}

}  // namespace solarpot::geom
