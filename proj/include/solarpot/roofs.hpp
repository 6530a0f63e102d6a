#pragma once

// Roof entities, section regularization against the building footprint, and
// geometric azimuth estimation.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solarpot/error.hpp"
#include "solarpot/geom.hpp"
#include "solarpot/pitch.hpp"

namespace solarpot::roofs {

using geom::Point2;
using geom::Polygon2;
using geom::Segment2;

struct Building {
    std::string id;
    Polygon2 footprint;
    double height_m = 0.0;       // above ground
    double ground_elev_m = 0.0;  // above sea level

    double roof_top_elev_m() const { return ground_elev_m + height_m; }
};

struct RoofSection {
    std::string id;
    std::string building_id;
    Polygon2 plan_polygon;
    std::vector<Segment2> ridge_segments;
    std::optional<double> pitch_deg;    // [0, 90)
    std::optional<double> azimuth_deg;  // [0, 360), clockwise from north, direction the slope faces
    pitch::FeatureVector features;
};

enum class ObjectKind { smoke_vent, roof_window, chimney, dormer, other };

inline constexpr std::array<std::string_view, 5> kObjectKindNames{"smoke_vent", "roof_window", "chimney", "dormer",
                                                                  "other"};

inline std::string_view to_string(ObjectKind k) { return kObjectKindNames[static_cast<std::size_t>(k)]; }

inline std::optional<ObjectKind> parse_object_kind(std::string_view s) {
    for (std::size_t i = 0; i < kObjectKindNames.size(); ++i)
        if (kObjectKindNames[i] == s) return static_cast<ObjectKind>(i);
    return std::nullopt;
}

struct RoofObject {
    std::string id;
    std::string section_id;
    Polygon2 polygon;
    ObjectKind kind = ObjectKind::other;
};

inline constexpr double kFlatPitchThresholdDeg = 5.0;

/// Orientation of the longest exterior edge modulo 90 degrees (counter-clockwise
/// from +x). Edges within 1e-9 relative length tie; the tie goes to the edge
/// whose start vertex is lexicographically smallest in (x, y).
inline double principal_facade_angle(const Polygon2& footprint) {
    const geom::Ring& r = footprint.exterior;
    if (r.size() < 3) throw GeometryError("principal_facade_angle: degenerate footprint");
    double best_len = -1.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double len = geom::distance(r[i], r[(i + 1) % r.size()]);
        const double tol = 1e-9 * std::max(len, best_len);
        if (len > best_len + tol) {
            best_len = len;
            best = i;
        } else if (std::abs(len - best_len) <= tol) {
            const Point2 a = r[i], b = r[best];
            if (a.x < b.x || (a.x == b.x && a.y < b.y)) best = i;
        }
    }
    if (best_len <= geom::kTolerance) throw GeometryError("principal_facade_angle: degenerate footprint");
    const Point2 e = r[(best + 1) % r.size()] - r[best];
    double a = geom::wrap_angle(geom::rad2deg(std::atan2(e.y, e.x)), 90.0);
    if (a >= 90.0 - 1e-9) a = 0.0;
    return a;
}

struct RegularizedSection {
    std::size_t input_index = 0;
    Polygon2 polygon;
};

struct RegularizeWarning {
    std::size_t input_index = 0;
    std::string message;
};

struct RegularizeResult {
    std::vector<RegularizedSection> sections;
    std::vector<RegularizeWarning> warnings;
};

/// Replaces raw section outlines with facade-aligned boxes. Overlapping boxes
/// are cut along the centerline of their overlap, parallel to its longer
/// dimension; results are clipped to the footprint's oriented bounding box.
inline RegularizeResult regularize_sections(const Polygon2& footprint, std::span<const Polygon2> raw_sections) {
    RegularizeResult result;
    const double facade = principal_facade_angle(footprint);
    const Point2 origin = geom::centroid(footprint);
    // Work in a frame where the facade is horizontal.
    const geom::Ring clip = geom::rotate_ring(geom::oriented_bbox(footprint).corners(), -facade, origin);

    struct Candidate {
        std::size_t index;
        geom::Box2 box;
    };
    std::vector<Candidate> boxes;
    for (std::size_t i = 0; i < raw_sections.size(); ++i) {
        if (!geom::intersects(raw_sections[i], footprint)) {
            result.warnings.push_back({i, "raw section does not overlap its footprint; skipped"});
            continue;
        }
        boxes.push_back({i, geom::bounds(geom::rotate_ring(raw_sections[i].exterior, -facade, origin))});
    }

    constexpr double eps = geom::kTolerance;
    for (std::size_t a = 0; a < boxes.size(); ++a) {
        for (std::size_t b = a + 1; b < boxes.size(); ++b) {
            geom::Box2& ba = boxes[a].box;
            geom::Box2& bb = boxes[b].box;
            if (ba.empty() || bb.empty()) continue;
            const double ox0 = std::max(ba.min.x, bb.min.x), ox1 = std::min(ba.max.x, bb.max.x);
            const double oy0 = std::max(ba.min.y, bb.min.y), oy1 = std::min(ba.max.y, bb.max.y);
            if (ox1 - ox0 <= eps || oy1 - oy0 <= eps) continue;
            if (ox1 - ox0 >= oy1 - oy0) {
                // ridge runs along x: split the overlap at its horizontal centerline
                const double mid = (oy0 + oy1) / 2.0;
                const bool a_below = ba.center().y <= bb.center().y;
                geom::Box2& lower = a_below ? ba : bb;
                geom::Box2& upper = a_below ? bb : ba;
                lower.max.y = std::min(lower.max.y, mid);
                upper.min.y = std::max(upper.min.y, mid);
            } else {
                const double mid = (ox0 + ox1) / 2.0;
                const bool a_left = ba.center().x <= bb.center().x;
                geom::Box2& left = a_left ? ba : bb;
                geom::Box2& right = a_left ? bb : ba;
                left.max.x = std::min(left.max.x, mid);
                right.min.x = std::max(right.min.x, mid);
            }
        }
    }

    for (const Candidate& c : boxes) {
        const geom::Box2& b = c.box;
        geom::Ring ring;
        if (b.width() > eps && b.height() > eps) {
            ring = geom::clip_convex({{b.min.x, b.min.y}, {b.max.x, b.min.y}, {b.max.x, b.max.y}, {b.min.x, b.max.y}},
                                     clip);
        }
        if (ring.size() < 3 || std::abs(geom::signed_area(ring)) <= eps * eps) {
            result.warnings.push_back({c.index, "section annihilated by regularization"});
            continue;
        }
        try {
            result.sections.push_back({c.index, geom::make_polygon(geom::rotate_ring(ring, facade, origin))});
        } catch (const GeometryError&) {
            result.warnings.push_back({c.index, "section degenerate after regularization"});
        }
    }
    return result;
}

/// Orientation of the section's minimum-area bounding box, expressed as a
/// compass bearing modulo 90 degrees. Candidate azimuths are this plus a
/// multiple of 90.
inline double bbox_bearing(const Polygon2& plan) {
    double b = geom::wrap_angle(90.0 - geom::oriented_bbox(plan).angle_deg, 90.0);
    if (b >= 90.0 - 1e-9) b = 0.0;
    return b;
}

struct AzimuthOptions {
    bool northern_hemisphere = true;
    double flat_roof_azimuth_deg = 180.0;
};

/// Picks the azimuth among bbox_bearing + {0, 90, 180, 270} whose facing
/// direction points furthest away from the mean centroid of the sibling
/// sections. Without siblings the candidate closest to the equator wins.
/// Flat sections (pitch < 5 degrees) get the configured mounting azimuth.
inline double estimate_azimuth(const RoofSection& section, std::span<const RoofSection> neighbors,
                               const AzimuthOptions& opts = {}) {
    if (section.pitch_deg && *section.pitch_deg < kFlatPitchThresholdDeg) return opts.flat_roof_azimuth_deg;

    const double theta = bbox_bearing(section.plan_polygon);
    const Point2 c = geom::centroid(section.plan_polygon);

    Point2 mean{};
    std::size_t count = 0;
    for (const RoofSection& n : neighbors) {
        if (n.id == section.id && n.building_id == section.building_id) continue;
        mean = mean + geom::centroid(n.plan_polygon);
        ++count;
    }

    double best_az = theta;
    if (count == 0) {
        const double equator = opts.northern_hemisphere ? 180.0 : 0.0;
        double best_dist = 1e300;
        for (int k = 0; k < 4; ++k) {
            const double az = geom::wrap_angle(theta + 90.0 * k);
            const double d = std::abs(geom::wrap_angle(az - equator + 180.0) - 180.0);
            if (d < best_dist - 1e-9) {
                best_dist = d;
                best_az = az;
            }
        }
        return best_az;
    }

    mean = mean * (1.0 / static_cast<double>(count));
    const Point2 away = c - mean;
    double best_score = -1e300;
    for (int k = 0; k < 4; ++k) {
        const double az = geom::wrap_angle(theta + 90.0 * k);
        const double s = geom::dot(geom::compass_direction(az), away);
        if (s > best_score + 1e-9) {
            best_score = s;
            best_az = az;
        }
    }
    return best_az;
}

}  // namespace solarpot::roofs
