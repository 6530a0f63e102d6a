#pragma once

// Horizon masks from neighboring buildings (ray casting against footprint
// prisms) and from terrain (marching over an elevation raster).

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/geometry/index/rtree.hpp>

#include "solarpot/error.hpp"
#include "solarpot/geom.hpp"
#include "solarpot/horizon.hpp"
#include "solarpot/roofs.hpp"

namespace solarpot::shading {

using geom::Point2;

inline constexpr double kDefaultBuildingMaxDistM = 500.0;
inline constexpr double kDefaultDemMaxDistM = 20000.0;

/// ESRI-style grid: row 0 is the northern edge, origin is the lower-left corner.
struct DemRaster {
    Point2 origin;
    double cell_size_m = 1.0;
    int n_cols = 0;
    int n_rows = 0;
    std::vector<double> elevation_m;  // row-major, n_rows * n_cols
    double nodata = -9999.0;

    double at(int row, int col) const { return elevation_m[static_cast<std::size_t>(row) * n_cols + col]; }
    bool is_nodata(double v) const { return v == nodata || std::isnan(v); }
    double width() const { return n_cols * cell_size_m; }
    double height() const { return n_rows * cell_size_m; }

    bool covers(Point2 p) const {
        return p.x >= origin.x && p.x <= origin.x + width() && p.y >= origin.y && p.y <= origin.y + height();
    }

    /// Row and column of the cell holding p (the grid is closed on all sides).
    std::optional<std::pair<int, int>> cell_of(Point2 p) const {
        if (!covers(p)) return std::nullopt;
        const int c = std::min(static_cast<int>((p.x - origin.x) / cell_size_m), n_cols - 1);
        const int r = std::min(static_cast<int>((origin.y + height() - p.y) / cell_size_m), n_rows - 1);
        return std::pair{r, c};
    }

    Point2 cell_center(int row, int col) const {
        return {origin.x + (col + 0.5) * cell_size_m, origin.y + height() - (row + 0.5) * cell_size_m};
    }

    /// Bilinear interpolation between cell centers (clamped at the outer half
    /// cells). Empty when any contributing cell is nodata or p is off the grid.
    std::optional<double> sample(Point2 p) const {
        if (!covers(p)) return std::nullopt;
        const double fx = std::clamp((p.x - origin.x) / cell_size_m - 0.5, 0.0, n_cols - 1.0);
        const double fy = std::clamp((origin.y + height() - p.y) / cell_size_m - 0.5, 0.0, n_rows - 1.0);
        const int c0 = static_cast<int>(std::floor(fx)), r0 = static_cast<int>(std::floor(fy));
        const int c1 = std::min(c0 + 1, n_cols - 1), r1 = std::min(r0 + 1, n_rows - 1);
        const double tx = fx - c0, ty = fy - r0;
        const double v00 = at(r0, c0), v01 = at(r0, c1), v10 = at(r1, c0), v11 = at(r1, c1);
        if (is_nodata(v00) || is_nodata(v01) || is_nodata(v10) || is_nodata(v11)) return std::nullopt;
        return (v00 * (1 - tx) + v01 * tx) * (1 - ty) + (v10 * (1 - tx) + v11 * tx) * ty;
    }
};

inline void validate(const DemRaster& d) {
    if (!(d.cell_size_m > 0.0)) throw ArgumentError("DEM: cell size must be > 0");
    if (d.n_cols < 1 || d.n_rows < 1) throw ArgumentError("DEM: grid must be at least 1 x 1");
    if (d.elevation_m.size() != static_cast<std::size_t>(d.n_cols) * d.n_rows)
        throw FormatError("DEM: value count does not match ncols * nrows");
}

/// Terrain horizon: march along each sector's central azimuth every step_m and
/// take the elevation angle to the center of each cell crossed. Cell centers
/// are exact samples, so a cone of slope s reads atan(s) at any resolution.
/// The evaluation cell itself and nodata cells are skipped.
inline HorizonMask dem_horizon(Point2 eval_point, double eval_height_m, const DemRaster& dem,
                               int n_sectors = kDefaultSectors, double max_dist_m = kDefaultDemMaxDistM,
                               std::optional<double> step_m = std::nullopt) {
    const double step = step_m.value_or(dem.cell_size_m);
    if (!(step >= dem.cell_size_m / 2.0)) throw ArgumentError("dem_horizon: step must be >= half the cell size");
    if (!(max_dist_m > 0.0)) throw ArgumentError("dem_horizon: max_dist must be > 0");
    const auto home = dem.cell_of(eval_point);
    if (!home) throw OutOfBoundsError("dem_horizon: evaluation point lies outside the DEM");
    HorizonMask mask(n_sectors);
    for (int i = 0; i < n_sectors; ++i) {
        const Point2 d = geom::compass_direction(mask.sector_center_deg(i));
        double best = 0.0;
        std::pair<int, int> last = *home;
        for (int k = 1;; ++k) {
            const double dist = k * step;
            if (dist > max_dist_m) break;
            const auto cell = dem.cell_of(eval_point + d * dist);
            if (!cell) break;
            if (*cell == last) continue;
            last = *cell;
            const double z = dem.at(cell->first, cell->second);
            if (dem.is_nodata(z)) continue;
            const double t = geom::distance(eval_point, dem.cell_center(cell->first, cell->second));
            if (t <= 0.0 || t > max_dist_m) continue;
            best = std::max(best, geom::rad2deg(std::atan2(z - eval_height_m, t)));
        }
        mask.gamma_deg[static_cast<std::size_t>(i)] = best;
    }
    return mask;
}

namespace bgi = boost::geometry::index;

/// R-tree over footprint bounding boxes.
class SpatialIndex {
public:
    SpatialIndex() = default;
    explicit SpatialIndex(std::vector<roofs::Building> buildings) : buildings_(std::move(buildings)) {
        std::vector<Value> values;
        values.reserve(buildings_.size());
        for (std::size_t i = 0; i < buildings_.size(); ++i) {
            const geom::Box2 b = geom::bounds(buildings_[i].footprint);
            values.push_back({BgBox{{b.min.x, b.min.y}, {b.max.x, b.max.y}}, i});
            max_top_ = std::max(max_top_, buildings_[i].roof_top_elev_m());
        }
        tree_ = Tree(values.begin(), values.end());
    }

    const std::vector<roofs::Building>& buildings() const { return buildings_; }
    std::size_t size() const { return buildings_.size(); }
    double max_roof_top_m() const { return max_top_; }

    /// Indices (ascending) of buildings whose bbox meets the query box.
    std::vector<std::size_t> query(const geom::Box2& box) const {
        std::vector<Value> hits;
        tree_.query(bgi::intersects(BgBox{{box.min.x, box.min.y}, {box.max.x, box.max.y}}), std::back_inserter(hits));
        std::vector<std::size_t> out;
        out.reserve(hits.size());
        for (const Value& v : hits) out.push_back(v.second);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    using BgPoint = geom::detail::BgPoint;
    using BgBox = boost::geometry::model::box<BgPoint>;
    using Value = std::pair<BgBox, std::size_t>;
    using Tree = boost::geometry::index::rtree<Value, boost::geometry::index::rstar<16>>;

    std::vector<roofs::Building> buildings_;
    Tree tree_;
    double max_top_ = -std::numeric_limits<double>::infinity();
};

struct HorizonOptions {
    int n_sectors = kDefaultSectors;
    double max_dist_m = kDefaultBuildingMaxDistM;
    double min_gamma_deg = 0.0;              // prefilter threshold; 0 keeps every taller building in range
    std::optional<std::string> exclude_id;   // the building the evaluation point sits on
};

/// Candidate occluders: within max_dist of the evaluation point and tall
/// enough that their best-case elevation angle reaches min_gamma.
inline std::vector<std::size_t> prefilter_buildings(const SpatialIndex& index, Point2 eval_point, double eval_height_m,
                                                    double min_gamma_deg, double max_dist_m = kDefaultBuildingMaxDistM) {
    if (index.size() == 0) return {};
    const double rise = index.max_roof_top_m() - eval_height_m;
    if (rise <= 0.0) return {};
    double radius = max_dist_m;
    if (min_gamma_deg > 0.0) radius = std::min(radius, rise / std::tan(geom::deg2rad(min_gamma_deg)));
    const geom::Box2 query{{eval_point.x - radius, eval_point.y - radius}, {eval_point.x + radius, eval_point.y + radius}};
    std::vector<std::size_t> out;
    for (std::size_t i : index.query(query)) {
        const roofs::Building& b = index.buildings()[i];
        const double h = b.roof_top_elev_m() - eval_height_m;
        if (h <= 0.0) continue;
        const double d = geom::bounds(b.footprint).distance_to(eval_point);
        if (d > max_dist_m) continue;
        if (d > 0.0 && geom::rad2deg(std::atan2(h, d)) < min_gamma_deg) continue;
        out.push_back(i);
    }
    return out;
}

namespace detail {

/// Distance along the ray from o in unit direction d to segment ab, if hit.
inline std::optional<double> ray_segment(Point2 o, Point2 d, Point2 a, Point2 b) {
    const Point2 e = b - a;
    const double den = geom::cross(d, e);
    if (std::abs(den) < 1e-15) return std::nullopt;
    const Point2 w = a - o;
    const double t = geom::cross(w, e) / den;
    const double u = geom::cross(w, d) / den;
    if (t <= 0.0 || u < -1e-12 || u > 1.0 + 1e-12) return std::nullopt;
    return t;
}

/// Raises mask sectors whose central ray crosses edge ab to the occluder angle.
inline void cast_edge(HorizonMask& mask, Point2 o, Point2 a, Point2 b, double rise, double max_dist) {
    const double w = mask.sector_width_deg();
    auto bearing = [&](Point2 p) { return geom::wrap_angle(geom::rad2deg(std::atan2(p.x - o.x, p.y - o.y))); };
    const double za = bearing(a);
    double span = geom::wrap_angle(bearing(b) - za + 180.0) - 180.0;  // signed, (-180, 180]
    double start = za;
    if (span < 0.0) {
        start = geom::wrap_angle(za + span);
        span = -span;
    }
    // sector centers c = (i + 0.5) w with c in [start, start + span]
    const int first = static_cast<int>(std::ceil((start - 1e-9) / w - 0.5));
    const int last = static_cast<int>(std::floor((start + span + 1e-9) / w - 0.5));
    for (int k = first; k <= last; ++k) {
        const int i = ((k % mask.n_sectors()) + mask.n_sectors()) % mask.n_sectors();
        const auto t = ray_segment(o, geom::compass_direction(mask.sector_center_deg(i)), a, b);
        if (!t || *t > max_dist) continue;
        double& g = mask.gamma_deg[static_cast<std::size_t>(i)];
        g = std::max(g, geom::rad2deg(std::atan2(rise, *t)));
    }
}

}  // namespace detail

/// Building horizon over an explicit candidate list.
inline HorizonMask building_horizon(Point2 eval_point, double eval_height_m, const SpatialIndex& index,
                                    std::span<const std::size_t> candidates, const HorizonOptions& opts) {
    if (opts.n_sectors < 8) throw ArgumentError("building_horizon: n_sectors must be >= 8");
    if (!(opts.max_dist_m > 0.0)) throw ArgumentError("building_horizon: max_dist must be > 0");
    HorizonMask mask(opts.n_sectors);
    for (std::size_t i : candidates) {
        const roofs::Building& b = index.buildings()[i];
        if (opts.exclude_id && b.id == *opts.exclude_id) continue;
        const double rise = b.roof_top_elev_m() - eval_height_m;
        if (rise <= 0.0) continue;
        auto ring_edges = [&](const geom::Ring& r) {
            for (std::size_t k = 0; k < r.size(); ++k)
                detail::cast_edge(mask, eval_point, r[k], r[(k + 1) % r.size()], rise, opts.max_dist_m);
        };
        ring_edges(b.footprint.exterior);
        for (const geom::Ring& h : b.footprint.holes) ring_edges(h);
    }
    return mask;
}

/// Building horizon with the distance/height prefilter.
inline HorizonMask building_horizon(Point2 eval_point, double eval_height_m, const SpatialIndex& index,
                                    const HorizonOptions& opts = {}) {
    const auto candidates =
        prefilter_buildings(index, eval_point, eval_height_m, opts.min_gamma_deg, opts.max_dist_m);
    return building_horizon(eval_point, eval_height_m, index, candidates, opts);
}

/// Building horizon over every building in the index (reference path).
inline HorizonMask building_horizon_brute_force(Point2 eval_point, double eval_height_m, const SpatialIndex& index,
                                                const HorizonOptions& opts = {}) {
    std::vector<std::size_t> all(index.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return building_horizon(eval_point, eval_height_m, index, all, opts);
}

struct ShadingOptions {
    int n_sectors = kDefaultSectors;
    double building_max_dist_m = kDefaultBuildingMaxDistM;
    double dem_max_dist_m = kDefaultDemMaxDistM;
    std::optional<double> dem_step_m;
    double min_gamma_deg = 0.0;
};

/// Mask for one roof section: evaluated at the plan centroid, at the roof top
/// of its building, against other buildings and (optionally) terrain.
inline HorizonMask section_mask(const roofs::RoofSection& section, const roofs::Building& building,
                                const SpatialIndex& index, const DemRaster* dem, const ShadingOptions& opts = {}) {
    const Point2 c = geom::centroid(section.plan_polygon);
    const double h = building.roof_top_elev_m();
    HorizonOptions ho;
    ho.n_sectors = opts.n_sectors;
    ho.max_dist_m = opts.building_max_dist_m;
    ho.min_gamma_deg = opts.min_gamma_deg;
    ho.exclude_id = building.id;
    HorizonMask m = building_horizon(c, h, index, ho);
    if (dem) m = combine_masks(m, dem_horizon(c, h, *dem, opts.n_sectors, opts.dem_max_dist_m, opts.dem_step_m));
    return m;
}

}  // namespace solarpot::shading
