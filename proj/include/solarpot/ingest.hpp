#pragma once

// File ingestion: feature collections, weather CSV, ESRI ASCII DEM, run
// configuration, and a local projection for geographic inputs.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "solarpot/error.hpp"
#include "solarpot/geom.hpp"
#include "solarpot/packing.hpp"
#include "solarpot/roofs.hpp"
#include "solarpot/shading.hpp"
#include "solarpot/solar.hpp"

namespace solarpot::ingest {

using nlohmann::json;
using geom::Point2;

inline constexpr double kEarthRadiusM = 6371008.8;

struct LonLat {
    double lon = 0.0;
    double lat = 0.0;
};

inline double haversine_m(LonLat a, LonLat b) {
    const double p1 = geom::deg2rad(a.lat), p2 = geom::deg2rad(b.lat);
    const double dp = p2 - p1, dl = geom::deg2rad(b.lon - a.lon);
    const double h = std::sin(dp / 2) * std::sin(dp / 2) + std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

/// Spherical transverse Mercator centered on `origin` (x east, y north, meters).
class Projection {
public:
    explicit Projection(LonLat origin) : origin_(origin) {}

    LonLat origin() const { return origin_; }

    Point2 forward(LonLat p) const {
        const double phi = geom::deg2rad(p.lat), dl = geom::deg2rad(p.lon - origin_.lon);
        const double b = std::cos(phi) * std::sin(dl);
        return {kEarthRadiusM * std::atanh(b),
                kEarthRadiusM * (std::atan2(std::tan(phi), std::cos(dl)) - geom::deg2rad(origin_.lat))};
    }

    LonLat inverse(Point2 q) const {
        const double d = q.y / kEarthRadiusM + geom::deg2rad(origin_.lat);
        const double x = q.x / kEarthRadiusM;
        const double lat = std::asin(std::sin(d) / std::cosh(x));
        const double lon = origin_.lon + geom::rad2deg(std::atan2(std::sinh(x), std::cos(d)));
        return {lon, geom::rad2deg(lat)};
    }

private:
    LonLat origin_;
};

// ---------------------------------------------------------------------------
// JSON files.

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(path + ": " + e.what());
    }
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(1) << '\n';
}

// ---------------------------------------------------------------------------
// Feature collections.

inline void check_collection(const json& fc, const std::string& layer) {
    if (!fc.is_object() || fc.value("type", "") != "FeatureCollection" || !fc.contains("features") ||
        !fc["features"].is_array())
        throw SchemaError(layer + ": not a FeatureCollection");
    for (const json& f : fc["features"])
        if (!f.is_object() || f.value("type", "") != "Feature" || !f.contains("properties") ||
            !f["properties"].is_object())
            throw SchemaError(layer + ": malformed feature");
}

inline json empty_collection() { return {{"type", "FeatureCollection"}, {"features", json::array()}}; }

inline bool is_local(const json& fc) { return fc.value("crs_local", false); }

inline std::optional<LonLat> collection_origin(const json& fc) {
    if (!fc.contains("origin")) return std::nullopt;
    const json& o = fc["origin"];
    if (!o.is_array() || o.size() != 2 || !o[0].is_number() || !o[1].is_number())
        throw SchemaError("origin must be [lon, lat]");
    return LonLat{o[0].get<double>(), o[1].get<double>()};
}

inline std::string feature_id(const json& f) {
    const json& p = f["properties"];
    if (p.contains("id") && p["id"].is_string()) return p["id"].get<std::string>();
    if (p.contains("id") && p["id"].is_number_integer()) return std::to_string(p["id"].get<long long>());
    return "<no id>";
}

namespace detail {

inline const json& require(const json& f, const char* field) {
    const json& p = f["properties"];
    if (!p.contains(field) || p[field].is_null())
        throw SchemaError("feature " + feature_id(f) + ": missing property '" + field + "'");
    return p[field];
}

inline std::string require_string(const json& f, const char* field) {
    const json& v = require(f, field);
    if (!v.is_string()) throw SchemaError("feature " + feature_id(f) + ": property '" + field + "' must be a string");
    return v.get<std::string>();
}

inline double require_number(const json& f, const char* field) {
    const json& v = require(f, field);
    if (!v.is_number()) throw SchemaError("feature " + feature_id(f) + ": property '" + field + "' must be a number");
    return v.get<double>();
}

inline std::optional<double> optional_number(const json& f, const char* field) {
    const json& p = f["properties"];
    if (!p.contains(field) || p[field].is_null()) return std::nullopt;
    if (!p[field].is_number())
        throw SchemaError("feature " + feature_id(f) + ": property '" + field + "' must be a number");
    return p[field].get<double>();
}

inline std::string optional_string(const json& f, const char* field, const std::string& fallback) {
    const json& p = f["properties"];
    if (!p.contains(field) || p[field].is_null()) return fallback;
    if (!p[field].is_string())
        throw SchemaError("feature " + feature_id(f) + ": property '" + field + "' must be a string");
    return p[field].get<std::string>();
}

inline geom::Ring ring_from_json(const json& coords) {
    geom::Ring r;
    for (const json& c : coords) {
        if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
            throw GeometryError("coordinate must be [x, y]");
        r.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    return r;
}

inline json ring_to_json(const geom::Ring& r) {
    json a = json::array();
    for (Point2 p : r) a.push_back({p.x, p.y});
    if (!r.empty()) a.push_back({r.front().x, r.front().y});
    return a;
}

template <class F>
void for_each_position(json& coords, int depth, F&& f) {
    if (depth == 0) {
        f(coords);
        return;
    }
    for (json& c : coords) for_each_position(c, depth - 1, f);
}

}  // namespace detail

inline geom::Polygon2 polygon_from_feature(const json& f) {
    try {
        if (!f.contains("geometry") || !f["geometry"].is_object())
            throw GeometryError("missing geometry");
        const json& g = f["geometry"];
        if (g.value("type", "") != "Polygon") throw GeometryError("geometry must be a Polygon");
        if (!g.contains("coordinates") || !g["coordinates"].is_array() || g["coordinates"].empty())
            throw GeometryError("polygon without rings");
        const json& rings = g["coordinates"];
        std::vector<geom::Ring> holes;
        for (std::size_t i = 1; i < rings.size(); ++i) holes.push_back(detail::ring_from_json(rings[i]));
        return geom::make_polygon(detail::ring_from_json(rings[0]), std::move(holes));
    } catch (const GeometryError& e) {
        throw GeometryError("feature " + feature_id(f) + ": " + e.what());
    }
}

inline json polygon_to_geometry(const geom::Polygon2& p) {
    json rings = json::array();
    rings.push_back(detail::ring_to_json(p.exterior));
    for (const auto& h : p.holes) rings.push_back(detail::ring_to_json(h));
    return {{"type", "Polygon"}, {"coordinates", rings}};
}

/// Center of the coordinate bounding box of every polygon vertex.
inline LonLat bbox_center(const json& fc) {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const json& f : fc["features"]) {
        if (!f.contains("geometry") || !f["geometry"].is_object() || !f["geometry"].contains("coordinates")) continue;
        json coords = f["geometry"]["coordinates"];
        detail::for_each_position(coords, 2, [&](json& c) {
            if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) return;
            x0 = std::min(x0, c[0].get<double>()), x1 = std::max(x1, c[0].get<double>());
            y0 = std::min(y0, c[1].get<double>()), y1 = std::max(y1, c[1].get<double>());
        });
    }
    if (x0 > x1) return {};
    return {(x0 + x1) / 2.0, (y0 + y1) / 2.0};
}

/// Projects a geographic collection into the local frame. Polygon rings and
/// `ridge_segments` properties are converted; everything else passes through.
inline json localize(json fc, const Projection& proj) {
    auto project = [&](json& c) {
        if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
            throw GeometryError("coordinate must be [lon, lat]");
        const Point2 q = proj.forward({c[0].get<double>(), c[1].get<double>()});
        c[0] = q.x;
        c[1] = q.y;
    };
    for (json& f : fc["features"]) {
        if (f.contains("geometry") && f["geometry"].is_object() && f["geometry"].contains("coordinates"))
            detail::for_each_position(f["geometry"]["coordinates"], 2, project);
        json& p = f["properties"];
        if (p.contains("ridge_segments") && p["ridge_segments"].is_array())
            detail::for_each_position(p["ridge_segments"], 2, project);
    }
    fc["crs_local"] = true;
    fc["origin"] = {proj.origin().lon, proj.origin().lat};
    return fc;
}

// ---------------------------------------------------------------------------
// Domain values from features.

inline roofs::Building building_from_feature(const json& f) {
    roofs::Building b;
    b.id = detail::require_string(f, "id");
    b.height_m = detail::require_number(f, "height_m");
    b.ground_elev_m = detail::require_number(f, "ground_elev_m");
    if (!(b.height_m >= 0.0)) throw RangeError("building " + b.id + ": height_m must be >= 0");
    b.footprint = polygon_from_feature(f);
    return b;
}

inline roofs::RoofSection section_from_feature(const json& f) {
    roofs::RoofSection s;
    s.id = detail::require_string(f, "id");
    s.building_id = detail::require_string(f, "building_id");
    s.pitch_deg = detail::optional_number(f, "pitch_deg");
    s.azimuth_deg = detail::optional_number(f, "azimuth_deg");
    if (s.pitch_deg && !(*s.pitch_deg >= 0.0 && *s.pitch_deg < 90.0))
        throw RangeError("section " + s.id + ": pitch_deg outside [0, 90)");
    if (s.azimuth_deg && !(*s.azimuth_deg >= 0.0 && *s.azimuth_deg < 360.0))
        throw RangeError("section " + s.id + ": azimuth_deg outside [0, 360)");
    s.features.roof_material = detail::optional_string(f, "roof_material", pitch::kUnknown);
    s.features.roof_type = detail::optional_string(f, "roof_type", pitch::kUnknown);
    s.features.roof_shape = detail::optional_string(f, "roof_shape", pitch::kUnknown);
    s.features.building_height_m = detail::optional_number(f, "building_height_m");
    s.features.footprint_area_m2 = detail::optional_number(f, "footprint_area_m2");
    const json& p = f["properties"];
    if (p.contains("ridge_segments") && !p["ridge_segments"].is_null()) {
        if (!p["ridge_segments"].is_array()) throw SchemaError("section " + s.id + ": ridge_segments must be an array");
        for (const json& seg : p["ridge_segments"]) {
            const geom::Ring r = detail::ring_from_json(seg);
            if (r.size() != 2) throw SchemaError("section " + s.id + ": ridge segment needs two points");
            s.ridge_segments.push_back({r[0], r[1]});
        }
    }
    s.plan_polygon = polygon_from_feature(f);
    return s;
}

inline roofs::RoofObject object_from_feature(const json& f) {
    roofs::RoofObject o;
    o.id = detail::require_string(f, "id");
    o.section_id = detail::require_string(f, "section_id");
    const std::string kind = detail::require_string(f, "kind");
    const auto k = roofs::parse_object_kind(kind);
    if (!k) throw SchemaError("object " + o.id + ": unknown kind '" + kind + "'");
    o.kind = *k;
    o.polygon = polygon_from_feature(f);
    return o;
}

// ---------------------------------------------------------------------------
// Layers.

/// Buildings, sections and objects in one local frame. Geographic inputs are
/// projected about the center of the buildings layer.
struct Layers {
    json buildings = empty_collection();
    json sections = empty_collection();
    json objects = empty_collection();
    std::optional<LonLat> origin;
};

inline Layers localize_layers(json buildings, json sections, json objects) {
    check_collection(buildings, "buildings");
    check_collection(sections, "sections");
    check_collection(objects, "objects");
    Layers out;
    std::optional<Projection> proj;
    if (!is_local(buildings) && !buildings["features"].empty()) proj.emplace(bbox_center(buildings));
    else if (auto o = collection_origin(buildings)) out.origin = o;
    if (proj) out.origin = proj->origin();
    auto fit = [&](json fc, const std::string& layer) {
        if (fc["features"].empty()) {
            fc["crs_local"] = true;
            return fc;
        }
        if (is_local(fc)) {
            if (proj) throw SchemaError(layer + ": local coordinates mixed with geographic buildings");
            return fc;
        }
        if (!proj) throw SchemaError(layer + ": geographic coordinates mixed with local buildings");
        return localize(std::move(fc), *proj);
    };
    out.buildings = proj ? localize(std::move(buildings), *proj) : std::move(buildings);
    out.sections = fit(std::move(sections), "sections");
    out.objects = fit(std::move(objects), "objects");
    return out;
}

inline json read_layer(const std::optional<std::string>& path) {
    return path ? read_json_file(*path) : empty_collection();
}

inline std::vector<roofs::Building> load_buildings(const std::string& path) {
    const Layers l = localize_layers(read_json_file(path), empty_collection(), empty_collection());
    std::vector<roofs::Building> out;
    std::set<std::string> seen;
    for (const json& f : l.buildings["features"]) {
        out.push_back(building_from_feature(f));
        if (!seen.insert(out.back().id).second) throw SchemaError("duplicate building id " + out.back().id);
    }
    return out;
}

/// Sections checked against the buildings layer (projected about the buildings).
inline std::vector<roofs::RoofSection> load_sections(const std::string& path, const std::string& buildings_path) {
    const Layers l = localize_layers(read_json_file(buildings_path), read_json_file(path), empty_collection());
    std::set<std::string> ids;
    for (const json& f : l.buildings["features"]) ids.insert(detail::require_string(f, "id"));
    std::vector<roofs::RoofSection> out;
    for (const json& f : l.sections["features"]) {
        out.push_back(section_from_feature(f));
        if (!ids.count(out.back().building_id))
            throw ReferentialError("section " + out.back().id + ": unknown building_id '" + out.back().building_id + "'");
    }
    return out;
}

inline std::vector<roofs::RoofObject> load_objects(const std::string& path, const std::string& sections_path,
                                                   const std::string& buildings_path) {
    const Layers l =
        localize_layers(read_json_file(buildings_path), read_json_file(sections_path), read_json_file(path));
    std::set<std::string> ids;
    for (const json& f : l.sections["features"]) ids.insert(detail::require_string(f, "id"));
    std::vector<roofs::RoofObject> out;
    for (const json& f : l.objects["features"]) {
        out.push_back(object_from_feature(f));
        if (!ids.count(out.back().section_id))
            throw ReferentialError("object " + out.back().id + ": unknown section_id '" + out.back().section_id + "'");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Weather.

inline constexpr const char* kWeatherHeader = "timestamp_utc,ghi,dni,dhi,temp_air,wind_speed";

inline std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_number(const std::string& s, const std::string& where) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && *b == ' ') ++b;
    if (b < e && *b == '+') ++b;
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e) throw FormatError(where + ": bad number '" + s + "'");
    return v;
}

/// Reads, sorts and validates an hourly series; latitude and longitude come
/// from the caller.
inline solar::WeatherSeries load_weather(const std::string& path, double latitude_deg, double longitude_deg) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open weather file " + path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ": empty file");
    while (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kWeatherHeader) throw FormatError(path + ": expected header '" + std::string(kWeatherHeader) + "'");
    solar::WeatherSeries s;
    s.latitude_deg = latitude_deg;
    s.longitude_deg = longitude_deg;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        while (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = pitch::detail::split_csv_line(line);
        const std::string where = path + ":" + std::to_string(n);
        if (cells.size() != 6) throw FormatError(where + ": expected 6 fields");
        solar::WeatherRecord r;
        r.timestamp = solar::parse_timestamp(cells[0]);
        r.ghi = parse_number(cells[1], where);
        r.dni = parse_number(cells[2], where);
        r.dhi = parse_number(cells[3], where);
        r.temp_air = parse_number(cells[4], where);
        r.wind_speed = parse_number(cells[5], where);
        const std::string ts = solar::format_timestamp(r.timestamp);
        if (!(r.ghi >= 0.0) || !(r.dni >= 0.0) || !(r.dhi >= 0.0))
            throw RangeError("weather " + ts + ": negative irradiance");
        if (!(r.wind_speed >= 0.0)) throw RangeError("weather " + ts + ": negative wind speed");
        if (!(r.temp_air > -90.0 && r.temp_air < 70.0)) throw RangeError("weather " + ts + ": implausible temperature");
        s.records.push_back(r);
    }
    std::stable_sort(s.records.begin(), s.records.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    for (std::size_t i = 1; i < s.records.size(); ++i) {
        const auto dt = s.records[i].timestamp - s.records[i - 1].timestamp;
        if (dt == std::chrono::seconds{0})
            throw ContinuityError("weather: duplicate hour " + solar::format_timestamp(s.records[i].timestamp));
        if (dt != std::chrono::hours{1})
            throw ContinuityError("weather: missing hour " +
                                  solar::format_timestamp(s.records[i - 1].timestamp + std::chrono::hours{1}));
    }
    solar::check_full_year(s);
    return s;
}

inline void save_weather(const std::string& path, const solar::WeatherSeries& s) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << kWeatherHeader << '\n';
    for (const auto& r : s.records)
        out << solar::format_timestamp(r.timestamp) << ',' << format_number(r.ghi) << ',' << format_number(r.dni) << ','
            << format_number(r.dhi) << ',' << format_number(r.temp_air) << ',' << format_number(r.wind_speed) << '\n';
}

// ---------------------------------------------------------------------------
// DEM (ESRI ASCII grid, coordinates in the run's local frame).

inline shading::DemRaster load_dem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open DEM " + path);
    std::vector<std::string> tokens;
    for (std::string tok; in >> tok;) tokens.push_back(tok);
    std::map<std::string, std::string> header;
    std::size_t pos = 0;
    while (pos + 1 < tokens.size()) {
        std::string key = tokens[pos];
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
        const bool known = key == "ncols" || key == "nrows" || key == "xllcorner" || key == "yllcorner" ||
                           key == "xllcenter" || key == "yllcenter" || key == "cellsize" || key == "nodata_value";
        if (!known) break;
        header[key] = tokens[pos + 1];
        pos += 2;
    }
    auto get = [&](const char* k) -> std::optional<double> {
        auto it = header.find(k);
        if (it == header.end()) return std::nullopt;
        return parse_number(it->second, path);
    };
    const auto ncols = get("ncols"), nrows = get("nrows"), cell = get("cellsize");
    if (!ncols || !nrows || !cell) throw FormatError(path + ": header needs ncols, nrows and cellsize");
    shading::DemRaster d;
    d.n_cols = static_cast<int>(*ncols);
    d.n_rows = static_cast<int>(*nrows);
    d.cell_size_m = *cell;
    if (auto x = get("xllcorner")) d.origin.x = *x;
    else if (auto xc = get("xllcenter")) d.origin.x = *xc - *cell / 2.0;
    else throw FormatError(path + ": header needs xllcorner or xllcenter");
    if (auto y = get("yllcorner")) d.origin.y = *y;
    else if (auto yc = get("yllcenter")) d.origin.y = *yc - *cell / 2.0;
    else throw FormatError(path + ": header needs yllcorner or yllcenter");
    if (auto nd = get("nodata_value")) d.nodata = *nd;
    if (d.n_cols < 1 || d.n_rows < 1 || !(d.cell_size_m > 0.0)) throw FormatError(path + ": bad grid dimensions");
    for (; pos < tokens.size(); ++pos) d.elevation_m.push_back(parse_number(tokens[pos], path));
    if (d.elevation_m.size() != static_cast<std::size_t>(d.n_cols) * d.n_rows)
        throw FormatError(path + ": expected " + std::to_string(d.n_cols * d.n_rows) + " values, found " +
                          std::to_string(d.elevation_m.size()));
    return d;
}

inline void save_dem(const std::string& path, const shading::DemRaster& d) {
    shading::validate(d);
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << "ncols " << d.n_cols << "\nnrows " << d.n_rows << "\nxllcorner " << format_number(d.origin.x)
        << "\nyllcorner " << format_number(d.origin.y) << "\ncellsize " << format_number(d.cell_size_m)
        << "\nNODATA_value " << format_number(d.nodata) << '\n';
    for (int r = 0; r < d.n_rows; ++r) {
        for (int c = 0; c < d.n_cols; ++c) out << (c ? " " : "") << format_number(d.at(r, c));
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Run configuration.

struct Paths {
    std::optional<std::string> buildings, sections, objects, weather, dem, pitch_model, report, summary, masks_dir;
};

struct RunConfig {
    packing::PanelSpec panel;
    packing::PackingOptions packing;
    solar::PvSystemConfig pv;
    shading::ShadingOptions shading;
    roofs::AzimuthOptions azimuth;
    Paths paths;
    unsigned workers = 0;  // 0 = hardware concurrency
    std::uint64_t seed = 42;
    double max_error_fraction = 0.1;
    std::optional<LonLat> site;  // needed when inputs are in a local frame without an origin
};

namespace detail {

inline void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : keys) ok = ok || it.key() == k;
        if (!ok) throw InputError("config: unknown key '" + it.key() + "' in " + where);
    }
}

inline void read(const json& j, const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw InputError(std::string("config: '") + key + "' must be a number");
    out = j[key].get<double>();
}

inline void read(const json& j, const char* key, int& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) throw InputError(std::string("config: '") + key + "' must be an integer");
    out = j[key].get<int>();
}

}  // namespace detail

/// Relative paths resolve against `base_dir`.
inline RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    using detail::read;
    if (!j.is_object()) throw InputError("config: expected an object");
    detail::reject_unknown(j, "config", {"panel", "packing", "pv", "shading", "paths", "workers", "seed",
                                         "max_error_fraction", "site"});
    RunConfig c;
    if (j.contains("panel")) {
        const json& p = j["panel"];
        detail::reject_unknown(p, "panel", {"width_m", "height_m", "power_wp", "edge_margin_m", "inter_row_gap_m",
                                            "inter_col_gap_m"});
        read(p, "width_m", c.panel.width_m);
        read(p, "height_m", c.panel.height_m);
        read(p, "power_wp", c.panel.power_wp);
        read(p, "edge_margin_m", c.panel.edge_margin_m);
        read(p, "inter_row_gap_m", c.panel.inter_row_gap_m);
        read(p, "inter_col_gap_m", c.panel.inter_col_gap_m);
    }
    if (j.contains("packing")) {
        const json& p = j["packing"];
        detail::reject_unknown(p, "packing", {"offset_step_m", "ridge_buffer_m"});
        read(p, "offset_step_m", c.packing.offset_step_m);
        read(p, "ridge_buffer_m", c.packing.ridge_buffer_m);
    }
    if (j.contains("pv")) {
        const json& p = j["pv"];
        detail::reject_unknown(p, "pv", {"pdc0_w", "gamma_pdc_per_degC", "noct_degC", "inv_eff_nom", "dc_ac_ratio",
                                         "system_loss_fraction", "albedo"});
        read(p, "pdc0_w", c.pv.pdc0_w);
        read(p, "gamma_pdc_per_degC", c.pv.gamma_pdc_per_degC);
        read(p, "noct_degC", c.pv.noct_degC);
        read(p, "inv_eff_nom", c.pv.inv_eff_nom);
        read(p, "dc_ac_ratio", c.pv.dc_ac_ratio);
        read(p, "system_loss_fraction", c.pv.system_loss_fraction);
        read(p, "albedo", c.pv.albedo);
    }
    if (j.contains("shading")) {
        const json& s = j["shading"];
        detail::reject_unknown(s, "shading", {"n_sectors", "building_max_dist_m", "dem_max_dist_m", "dem_step_m",
                                              "min_gamma_deg", "flat_roof_azimuth_deg"});
        read(s, "n_sectors", c.shading.n_sectors);
        read(s, "building_max_dist_m", c.shading.building_max_dist_m);
        read(s, "dem_max_dist_m", c.shading.dem_max_dist_m);
        if (s.contains("dem_step_m")) {
            double v = 0.0;
            read(s, "dem_step_m", v);
            c.shading.dem_step_m = v;
        }
        read(s, "min_gamma_deg", c.shading.min_gamma_deg);
        read(s, "flat_roof_azimuth_deg", c.azimuth.flat_roof_azimuth_deg);
    }
    if (j.contains("paths")) {
        const json& p = j["paths"];
        detail::reject_unknown(p, "paths", {"buildings", "sections", "objects", "weather", "dem", "pitch_model",
                                            "report", "summary", "masks_dir"});
        auto path = [&](const char* key, std::optional<std::string>& out) {
            if (!p.contains(key) || p[key].is_null()) return;
            if (!p[key].is_string()) throw InputError(std::string("config: path '") + key + "' must be a string");
            const std::filesystem::path v = p[key].get<std::string>();
            out = (v.is_absolute() || base_dir.empty() ? v : base_dir / v).lexically_normal().string();
        };
        path("buildings", c.paths.buildings);
        path("sections", c.paths.sections);
        path("objects", c.paths.objects);
        path("weather", c.paths.weather);
        path("dem", c.paths.dem);
        path("pitch_model", c.paths.pitch_model);
        path("report", c.paths.report);
        path("summary", c.paths.summary);
        path("masks_dir", c.paths.masks_dir);
    }
    if (j.contains("workers")) {
        if (!j["workers"].is_number_unsigned()) throw InputError("config: 'workers' must be a non-negative integer");
        c.workers = j["workers"].get<unsigned>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw InputError("config: 'seed' must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    detail::read(j, "max_error_fraction", c.max_error_fraction);
    if (j.contains("site")) {
        const json& s = j["site"];
        detail::reject_unknown(s, "site", {"latitude", "longitude"});
        if (!s.contains("latitude") || !s.contains("longitude")) throw InputError("config: site needs latitude and longitude");
        LonLat ll;
        read(s, "latitude", ll.lat);
        read(s, "longitude", ll.lon);
        c.site = ll;
    }
    return c;
}

inline void validate(const RunConfig& c) {
    try {
        packing::validate(c.panel);
        solar::validate(c.pv);
    } catch (const ArgumentError& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    if (!(c.packing.offset_step_m > 0.0)) throw InputError("config: packing.offset_step_m must be > 0");
    if (!(c.packing.ridge_buffer_m >= 0.0)) throw InputError("config: packing.ridge_buffer_m must be >= 0");
    if (c.shading.n_sectors < 8) throw InputError("config: shading.n_sectors must be >= 8");
    if (!(c.shading.building_max_dist_m > 0.0) || !(c.shading.dem_max_dist_m > 0.0))
        throw InputError("config: shading distances must be > 0");
    if (!(c.shading.min_gamma_deg >= 0.0 && c.shading.min_gamma_deg < 90.0))
        throw InputError("config: shading.min_gamma_deg must lie in [0, 90)");
    if (!(c.azimuth.flat_roof_azimuth_deg >= 0.0 && c.azimuth.flat_roof_azimuth_deg < 360.0))
        throw InputError("config: shading.flat_roof_azimuth_deg must lie in [0, 360)");
    if (!(c.max_error_fraction >= 0.0 && c.max_error_fraction <= 1.0))
        throw InputError("config: max_error_fraction must lie in [0, 1]");
    if (c.site && !(std::abs(c.site->lat) <= 90.0 && std::abs(c.site->lon) <= 180.0))
        throw InputError("config: site outside valid latitude/longitude");
    auto must_exist = [](const std::optional<std::string>& p) {
        if (p && !std::filesystem::exists(*p)) throw InputError("input not found: " + *p);
    };
    must_exist(c.paths.buildings);
    must_exist(c.paths.sections);
    must_exist(c.paths.objects);
    must_exist(c.paths.weather);
    must_exist(c.paths.dem);
    must_exist(c.paths.pitch_model);
}

inline RunConfig load_config(const std::string& path) {
    RunConfig c = config_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
    return c;
}

}  // namespace solarpot::ingest
