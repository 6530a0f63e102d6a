#pragma once

// Rectangular module placement on a roof section. The section is unprojected
// onto its sloped plane, turned so the slope runs down -y, eroded by the edge
// margin, and filled row by row on a phase-shifted grid.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "solarpot/error.hpp"
#include "solarpot/geom.hpp"
#include "solarpot/roofs.hpp"

namespace solarpot::packing {

using geom::OrientedRect;
using geom::Point2;
using geom::Polygon2;

struct PanelSpec {
    double width_m = 1.722;   // long side
    double height_m = 1.134;  // short side
    double power_wp = 400.0;
    double edge_margin_m = 0.3;
    double inter_row_gap_m = 0.02;
    double inter_col_gap_m = 0.02;
};

inline void validate(const PanelSpec& s) {
    if (!(s.height_m > 0.0) || !(s.width_m >= s.height_m))
        throw ArgumentError("panel: need width_m >= height_m > 0");
    if (!(s.power_wp > 0.0)) throw ArgumentError("panel: power_wp must be > 0");
    if (!(s.edge_margin_m >= 0.0) || !(s.inter_row_gap_m >= 0.0) || !(s.inter_col_gap_m >= 0.0))
        throw ArgumentError("panel: margins and gaps must be >= 0");
    if (!std::isfinite(s.width_m) || !std::isfinite(s.edge_margin_m) || !std::isfinite(s.inter_row_gap_m) ||
        !std::isfinite(s.inter_col_gap_m))
        throw ArgumentError("panel: dimensions must be finite");
}

struct PackingOptions {
    double offset_step_m = 0.1;
    double ridge_buffer_m = 0.3;
};

enum class Orientation { landscape, portrait };

inline const char* to_string(Orientation o) { return o == Orientation::landscape ? "landscape" : "portrait"; }

struct Placement {
    Point2 center;  // packing frame
    Orientation orientation = Orientation::landscape;
};

/// Width along x, height along y, for a panel in the packing frame (rows run along x).
inline Point2 cell_size(const PanelSpec& s, Orientation o) {
    return o == Orientation::landscape ? Point2{s.width_m, s.height_m} : Point2{s.height_m, s.width_m};
}

inline OrientedRect panel_rect(const Placement& p, const PanelSpec& s) {
    const Point2 c = cell_size(s, p.orientation);
    return {p.center, 0.0, c.x / 2.0, c.y / 2.0};
}

struct PanelLayout {
    std::vector<Placement> placements;
    std::size_t count = 0;
    Polygon2 plane_polygon;                // unprojected section in the packing frame
    std::vector<Polygon2> usable;          // plane_polygon eroded by the edge margin
    std::vector<Polygon2> obstacles;       // packing frame
    std::vector<OrientedRect> ridge_zones; // packing frame
    Point2 offset;                         // grid phase of the chosen configuration
};

inline std::size_t max_module_count(const PanelLayout& layout) { return layout.placements.size(); }

/// Stretches the plan along the downslope axis by 1/cos(pitch), about origin.
inline Point2 unproject_point(Point2 q, double pitch_deg, double azimuth_deg, Point2 origin) {
    const Point2 d = geom::compass_direction(azimuth_deg);
    const Point2 rel = q - origin;
    const double s = geom::dot(rel, d);
    return origin + rel + d * (s * (1.0 / std::cos(geom::deg2rad(pitch_deg)) - 1.0));
}

inline Polygon2 unproject_to_roof_plane(const Polygon2& plan, double pitch_deg, double azimuth_deg, Point2 origin) {
    if (!(pitch_deg >= 0.0 && pitch_deg < 90.0)) throw ArgumentError("unproject: pitch must be in [0, 90)");
    if (pitch_deg == 0.0) return plan;
    auto map = [&](const geom::Ring& r) {
        geom::Ring out;
        out.reserve(r.size());
        for (Point2 q : r) out.push_back(unproject_point(q, pitch_deg, azimuth_deg, origin));
        return out;
    };
    Polygon2 out{map(plan.exterior), {}};
    for (const geom::Ring& h : plan.holes) out.holes.push_back(map(h));
    return out;
}

inline Polygon2 unproject_to_roof_plane(const Polygon2& plan, double pitch_deg, double azimuth_deg) {
    return unproject_to_roof_plane(plan, pitch_deg, azimuth_deg, geom::centroid(plan));
}

/// Plan-to-packing-frame map: unproject about the plan centroid, then rotate
/// so the downslope direction points along -y.
struct PlaneFrame {
    double pitch_deg = 0.0;
    double azimuth_deg = 180.0;
    Point2 origin;

    Point2 apply(Point2 q) const {
        return geom::rotate_point(unproject_point(q, pitch_deg, azimuth_deg, origin), azimuth_deg - 180.0, origin);
    }
    Polygon2 apply(const Polygon2& p) const {
        return geom::rotate_frame(unproject_to_roof_plane(p, pitch_deg, azimuth_deg, origin), azimuth_deg - 180.0,
                                  origin);
    }
};

inline OrientedRect ridge_zone(Point2 a, Point2 b, double buffer_m) {
    const Point2 d = b - a;
    const double len = geom::norm(d);
    const double angle = len > 0.0 ? geom::rad2deg(std::atan2(d.y, d.x)) : 0.0;
    return {(a + b) * 0.5, angle, len / 2.0 + buffer_m, buffer_m};
}

namespace detail {

// Panels may touch obstacles and each other; shrink before collision tests.
inline constexpr double kContactSlack = 1e-5;
// Matches geom::contains: flush contact with the usable boundary is allowed.
inline constexpr double kBoundarySlack = 2.0 * geom::kTolerance;

struct Edge {
    Point2 a, b;
    geom::Box2 box;
};

struct PreparedPolygon {
    const Polygon2* polygon = nullptr;
    geom::Box2 box;
    std::vector<Edge> edges;
};

inline PreparedPolygon prepare(const Polygon2& p) {
    PreparedPolygon out;
    out.polygon = &p;
    out.box = geom::bounds(p);
    auto add = [&](const geom::Ring& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            const Point2 a = r[i], b = r[(i + 1) % r.size()];
            out.edges.push_back({a, b, geom::bounds(geom::Ring{a, b})});
        }
    };
    add(p.exterior);
    for (const geom::Ring& h : p.holes) add(h);
    return out;
}

/// Liang-Barsky: true when segment ab reaches the interior of the box.
inline bool segment_enters(Point2 a, Point2 b, const geom::Box2& box) {
    double t0 = 0.0, t1 = 1.0;
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - box.min.x, box.max.x - a.x, a.y - box.min.y, box.max.y - a.y};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] <= 0.0) return false;
            continue;
        }
        const double t = q[k] / p[k];
        if (p[k] < 0.0)
            t0 = std::max(t0, t);
        else
            t1 = std::min(t1, t);
        if (t0 >= t1) return false;
    }
    return true;
}

inline bool strictly_overlaps(const geom::Box2& a, const geom::Box2& b) {
    return a.min.x < b.max.x && b.min.x < a.max.x && a.min.y < b.max.y && b.min.y < a.max.y;
}

/// Axis-aligned box inside the closed polygon: no edge reaches the shrunk box
/// and its center is inside.
inline bool box_inside(const PreparedPolygon& part, const geom::Box2& cell) {
    const geom::Box2 shrunk = cell.expanded(-kBoundarySlack);
    for (const Edge& e : part.edges)
        if (strictly_overlaps(e.box.expanded(geom::kTolerance), shrunk) && segment_enters(e.a, e.b, shrunk))
            return false;
    return geom::locate(cell.center(), *part.polygon) == geom::Location::inside;
}

/// Interiors of the box and the polygon meet.
inline bool box_hits(const PreparedPolygon& ob, const geom::Box2& cell) {
    const geom::Box2 shrunk = cell.expanded(-kContactSlack);
    if (!strictly_overlaps(ob.box, shrunk)) return false;
    for (const Edge& e : ob.edges)
        if (strictly_overlaps(e.box.expanded(geom::kTolerance), shrunk) && segment_enters(e.a, e.b, shrunk))
            return true;
    // no edge inside the box: either disjoint, or one contains the other
    if (geom::locate(shrunk.center(), *ob.polygon) != geom::Location::outside) return true;
    return false;
}

struct PreparedFrame {
    std::vector<PreparedPolygon> usable;
    std::vector<PreparedPolygon> obstacles;
    std::vector<Polygon2> zone_polygons;
};

inline std::vector<Placement> fill_grid(const PreparedFrame& frame, const geom::Box2& region, Point2 cell,
                                        Point2 period, Point2 offset, Orientation o) {
    std::vector<Placement> out;
    constexpr double eps = 1e-9;
    for (int row = 0;; ++row) {
        const double y = region.min.y + offset.y + row * period.y;
        if (y + cell.y > region.max.y + eps) break;
        for (int col = 0;; ++col) {
            const double x = region.min.x + offset.x + col * period.x;
            if (x + cell.x > region.max.x + eps) break;
            const geom::Box2 box{{x, y}, {x + cell.x, y + cell.y}};
            bool inside = false;
            for (const PreparedPolygon& part : frame.usable) {
                if (x < part.box.min.x - eps || y < part.box.min.y - eps || x + cell.x > part.box.max.x + eps ||
                    y + cell.y > part.box.max.y + eps)
                    continue;
                if (box_inside(part, box)) {
                    inside = true;
                    break;
                }
            }
            if (!inside) continue;
            bool blocked = false;
            for (const PreparedPolygon& ob : frame.obstacles)
                if (box_hits(ob, box)) {
                    blocked = true;
                    break;
                }
            if (!blocked) out.push_back({box.center(), o});
        }
    }
    return out;
}

}  // namespace detail

/// Packs on a polygon already in the packing frame (rows along x).
inline PanelLayout pack_plane(const Polygon2& plane, std::vector<Polygon2> obstacles,
                              std::vector<OrientedRect> ridge_zones, const PanelSpec& spec,
                              const PackingOptions& opts = {}) {
    validate(spec);
    if (!(opts.offset_step_m > 0.0)) throw ArgumentError("packing: offset step must be > 0");
    PanelLayout layout;
    layout.plane_polygon = plane;
    layout.obstacles = std::move(obstacles);
    layout.ridge_zones = std::move(ridge_zones);
    layout.usable = geom::erode(plane, spec.edge_margin_m);
    if (layout.usable.empty()) return layout;

    geom::Box2 region;
    for (const Polygon2& p : layout.usable) {
        const geom::Box2 b = geom::bounds(p);
        region.extend(b.min);
        region.extend(b.max);
    }

    detail::PreparedFrame prepared;
    for (const Polygon2& p : layout.usable) prepared.usable.push_back(detail::prepare(p));
    for (const OrientedRect& z : layout.ridge_zones) prepared.zone_polygons.push_back(z.to_polygon());
    for (const Polygon2& p : layout.obstacles) prepared.obstacles.push_back(detail::prepare(p));
    for (const Polygon2& p : prepared.zone_polygons) prepared.obstacles.push_back(detail::prepare(p));

    for (Orientation o : {Orientation::landscape, Orientation::portrait}) {
        const Point2 cell = cell_size(spec, o);
        const Point2 period{cell.x + spec.inter_col_gap_m, cell.y + spec.inter_row_gap_m};
        const int ny = std::max(1, static_cast<int>(std::ceil(period.y / opts.offset_step_m - 1e-9)));
        const int nx = std::max(1, static_cast<int>(std::ceil(period.x / opts.offset_step_m - 1e-9)));
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const Point2 off{i * opts.offset_step_m, j * opts.offset_step_m};
                auto placed = detail::fill_grid(prepared, region, cell, period, off, o);
                if (placed.size() > layout.placements.size()) {
                    layout.placements = std::move(placed);
                    layout.offset = off;
                }
            }
        }
    }
    layout.count = layout.placements.size();
    return layout;
}

inline PlaneFrame plane_frame(const roofs::RoofSection& section) {
    if (!section.pitch_deg || !section.azimuth_deg)
        throw StateError("pack_panels: section " + section.id + " has no pitch/azimuth assigned");
    return {*section.pitch_deg, *section.azimuth_deg, geom::centroid(section.plan_polygon)};
}

inline PanelLayout pack_panels(const roofs::RoofSection& section, std::span<const roofs::RoofObject> obstacles,
                               const PanelSpec& spec, const PackingOptions& opts = {}) {
    const PlaneFrame frame = plane_frame(section);
    std::vector<Polygon2> obs;
    for (const roofs::RoofObject& o : obstacles) obs.push_back(frame.apply(o.polygon));
    std::vector<OrientedRect> zones;
    for (const geom::Segment2& s : section.ridge_segments)
        zones.push_back(ridge_zone(frame.apply(s.a), frame.apply(s.b), opts.ridge_buffer_m));
    return pack_plane(frame.apply(section.plan_polygon), std::move(obs), std::move(zones), spec, opts);
}

/// Grid count along one axis of length L for cells of size s separated by gap g.
inline long tiling_count(double length, double size, double gap) {
    if (length < size) return 0;
    return static_cast<long>(std::floor((length + gap) / (size + gap) + 1e-9));
}

}  // namespace solarpot::packing
