#pragma once

// Stage functions over section feature collections. Every stage reads and
// writes the same collection format, so `run` equals the chained stages.

#include <algorithm>
#include <atomic>
#include <exception>
#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "solarpot/error.hpp"
#include "solarpot/horizon.hpp"
#include "solarpot/ingest.hpp"
#include "solarpot/packing.hpp"
#include "solarpot/pitch.hpp"
#include "solarpot/roofs.hpp"
#include "solarpot/shading.hpp"
#include "solarpot/solar.hpp"

#ifndef SOLARPOT_VERSION
#define SOLARPOT_VERSION "0.0.0"
#endif

namespace solarpot::pipeline {

using nlohmann::json;
using ingest::RunConfig;

inline constexpr const char* kVersion = SOLARPOT_VERSION;

/// Runs fn(i) for i in [0, n) on up to `workers` threads (0 = hardware).
template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& fn) {
    unsigned w = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
    w = static_cast<unsigned>(std::min<std::size_t>(w, n));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(m);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < w; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

inline double potential_kwh_per_year(double n_modules, double power_wp, double pvout_kwh_per_kwp) {
    if (!(n_modules >= 0.0) || !(power_wp >= 0.0) || !(pvout_kwh_per_kwp >= 0.0))
        throw ArgumentError("potential: inputs must be >= 0");
    return n_modules * (power_wp / 1000.0) * pvout_kwh_per_kwp;
}

/// Shared read-only inputs for the stages.
struct Context {
    RunConfig cfg;
    ingest::Layers layers;
    std::vector<roofs::Building> buildings;
    std::map<std::string, std::size_t> building_index;
    std::map<std::string, std::string> building_errors;
    std::map<std::string, std::vector<roofs::RoofObject>> objects_by_section;
    shading::SpatialIndex index;
    std::optional<shading::DemRaster> dem;
    std::optional<solar::WeatherSeries> weather;
    std::optional<solar::SolarTrack> track;
    std::optional<pitch::PitchModel> model;
    std::optional<ingest::LonLat> site;
    std::vector<std::string> warnings;
};

inline bool has_error(const json& f) { return f["properties"].contains("error"); }

inline void set_error(json& f, const std::string& stage, const std::string& msg) {
    f["properties"]["error"] = stage + ": " + msg;
}

namespace detail {

inline std::string section_id(const json& f) {
    const json& p = f["properties"];
    return p.contains("id") && p["id"].is_string() ? p["id"].get<std::string>() : ingest::feature_id(f);
}

inline std::string building_of(const json& f) {
    const json& p = f["properties"];
    return p.contains("building_id") && p["building_id"].is_string() ? p["building_id"].get<std::string>() : "";
}

inline void sort_features(json& fc) {
    std::stable_sort(fc["features"].begin(), fc["features"].end(),
                     [](const json& a, const json& b) { return section_id(a) < section_id(b); });
}

/// Features grouped by building id, groups in id order, features in input order.
inline std::vector<std::vector<std::size_t>> groups(const json& fc) {
    std::map<std::string, std::vector<std::size_t>> g;
    const json& fs = fc["features"];
    for (std::size_t i = 0; i < fs.size(); ++i) g[building_of(fs[i])].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [_, v] : g) out.push_back(std::move(v));
    return out;
}

template <class F>
json per_building(json sections, const Context& ctx, F&& fn) {
    const auto gs = groups(sections);
    json& fs = sections["features"];
    parallel_for(gs.size(), ctx.cfg.workers, [&](std::size_t k) {
        std::vector<json*> members;
        for (std::size_t i : gs[k]) members.push_back(&fs[i]);
        fn(members);
    });
    sort_features(sections);
    return sections;
}

template <class F>
json per_section(json sections, const Context& ctx, const char* stage, F&& fn) {
    return per_building(std::move(sections), ctx, [&](std::vector<json*>& members) {
        for (json* f : members) {
            if (has_error(*f)) continue;
            try {
                fn(*f);
            } catch (const Error& e) {
                set_error(*f, stage, e.what());
            }
        }
    });
}

inline const roofs::Building* building_for(const Context& ctx, json& f, const char* stage) {
    const std::string b = building_of(f);
    if (auto it = ctx.building_errors.find(b); it != ctx.building_errors.end()) {
        set_error(f, stage, "building " + b + ": " + it->second);
        return nullptr;
    }
    auto it = ctx.building_index.find(b);
    if (it == ctx.building_index.end()) {
        set_error(f, stage, "unknown building_id '" + b + "'");
        return nullptr;
    }
    return &ctx.buildings[it->second];
}

inline void check_unique_ids(const json& fc, const std::string& layer) {
    std::set<std::string> seen;
    for (const json& f : fc["features"]) {
        const std::string id = ingest::feature_id(f);
        if (!seen.insert(id).second) throw SchemaError(layer + ": duplicate id " + id);
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Context construction.

struct LoadOptions {
    bool weather = false;
    bool dem = false;
    bool pitch_model = false;
};

/// Reads the layers named in the config (the sections layer may be replaced by
/// `sections`), projects them into one frame and builds the shared indexes.
inline Context make_context(const RunConfig& cfg, std::optional<json> sections, const LoadOptions& load) {
    ingest::validate(cfg);
    Context ctx;
    ctx.cfg = cfg;
    if (!cfg.paths.buildings) throw InputError("config: paths.buildings is required");
    json secs = sections ? std::move(*sections) : ingest::read_layer(cfg.paths.sections);
    ctx.layers = ingest::localize_layers(ingest::read_json_file(*cfg.paths.buildings), std::move(secs),
                                         ingest::read_layer(cfg.paths.objects));
    detail::check_unique_ids(ctx.layers.buildings, "buildings");
    detail::check_unique_ids(ctx.layers.sections, "sections");
    ctx.site = cfg.site ? cfg.site : ctx.layers.origin;

    std::vector<roofs::Building> valid;
    for (const json& f : ctx.layers.buildings["features"]) {
        try {
            valid.push_back(ingest::building_from_feature(f));
        } catch (const Error& e) {
            ctx.building_errors[ingest::feature_id(f)] = e.what();
        }
    }
    std::sort(valid.begin(), valid.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < valid.size(); ++i) ctx.building_index[valid[i].id] = i;
    ctx.buildings = valid;
    ctx.index = shading::SpatialIndex(std::move(valid));

    std::set<std::string> section_ids;
    for (const json& f : ctx.layers.sections["features"]) section_ids.insert(ingest::feature_id(f));
    for (const json& f : ctx.layers.objects["features"]) {
        try {
            roofs::RoofObject o = ingest::object_from_feature(f);
            if (!section_ids.count(o.section_id))
                throw ReferentialError("object " + o.id + ": unknown section_id '" + o.section_id + "'");
            ctx.objects_by_section[o.section_id].push_back(std::move(o));
        } catch (const Error& e) {
            ctx.warnings.push_back(std::string("objects: ") + e.what() + "; ignored");
        }
    }

    if (load.weather) {
        if (!cfg.paths.weather) throw InputError("config: paths.weather is required");
        if (!ctx.site) throw InputError("site latitude/longitude unknown: set config.site or use geographic inputs");
        ctx.weather = ingest::load_weather(*cfg.paths.weather, ctx.site->lat, ctx.site->lon);
        ctx.track = solar::solar_track(*ctx.weather);
    }
    if (load.dem && cfg.paths.dem) ctx.dem = ingest::load_dem(*cfg.paths.dem);
    if (load.pitch_model && cfg.paths.pitch_model) ctx.model = pitch::load_pitch_model(*cfg.paths.pitch_model);
    return ctx;
}

// ---------------------------------------------------------------------------
// Stages.

/// Replaces each section outline with its facade-aligned box. Sections the
/// regularization skips (disjoint or annihilated) leave the collection and are
/// listed in its top-level `warnings` array.
inline json stage_regularize(json sections, const Context& ctx) {
    sections = detail::per_building(std::move(sections), ctx, [&](std::vector<json*>& members) {
        std::vector<json*> live;
        std::vector<geom::Polygon2> raw;
        for (json* f : members) {
            if (has_error(*f)) continue;
            const roofs::Building* b = detail::building_for(ctx, *f, "regularize");
            if (!b) continue;
            try {
                raw.push_back(ingest::polygon_from_feature(*f));
                live.push_back(f);
            } catch (const Error& e) {
                set_error(*f, "regularize", e.what());
            }
        }
        if (live.empty()) return;
        const roofs::Building& b = ctx.buildings[ctx.building_index.at(detail::building_of(*live.front()))];
        try {
            const auto result = roofs::regularize_sections(b.footprint, raw);
            for (const auto& w : result.warnings) (*live[w.input_index])["properties"]["skipped"] = w.message;
            for (const auto& s : result.sections)
                (*live[s.input_index])["geometry"] = ingest::polygon_to_geometry(s.polygon);
        } catch (const Error& e) {
            for (json* f : live) set_error(*f, "regularize", e.what());
        }
    });
    json kept = json::array();
    if (!sections.contains("warnings")) sections["warnings"] = json::array();
    for (json& f : sections["features"]) {
        json& p = f["properties"];
        if (p.contains("skipped")) {
            sections["warnings"].push_back("section " + detail::section_id(f) + ": " + p["skipped"].get<std::string>());
            continue;
        }
        kept.push_back(std::move(f));
    }
    sections["features"] = std::move(kept);
    return sections;
}

/// Fills missing azimuths from the section box and its siblings.
inline json stage_azimuth(json sections, const Context& ctx) {
    return detail::per_building(std::move(sections), ctx, [&](std::vector<json*>& members) {
        std::vector<json*> live;
        std::vector<roofs::RoofSection> parsed;
        for (json* f : members) {
            if (has_error(*f)) continue;
            try {
                parsed.push_back(ingest::section_from_feature(*f));
                live.push_back(f);
            } catch (const Error& e) {
                set_error(*f, "azimuth", e.what());
            }
        }
        for (std::size_t i = 0; i < live.size(); ++i) {
            json& p = (*live[i])["properties"];
            if (parsed[i].azimuth_deg) {
                if (!p.contains("azimuth_source")) p["azimuth_source"] = "input";
                continue;
            }
            try {
                p["azimuth_deg"] = roofs::estimate_azimuth(parsed[i], parsed, ctx.cfg.azimuth);
                p["azimuth_source"] = "estimated";
            } catch (const Error& e) {
                set_error(*live[i], "azimuth", e.what());
            }
        }
    });
}

/// Fills missing pitches with the latitude line times the forest correction.
inline json stage_pitch(json sections, const Context& ctx) {
    return detail::per_section(std::move(sections), ctx, "pitch", [&](json& f) {
        const roofs::RoofSection s = ingest::section_from_feature(f);
        json& p = f["properties"];
        if (s.pitch_deg) {
            if (!p.contains("pitch_source")) p["pitch_source"] = "input";
            return;
        }
        if (!ctx.model) throw StateError("pitch_deg missing and no pitch model configured");
        if (!ctx.site) throw StateError("pitch prediction needs the site latitude");
        pitch::FeatureVector fv = s.features;
        if (auto it = ctx.building_index.find(s.building_id); it != ctx.building_index.end()) {
            const roofs::Building& b = ctx.buildings[it->second];
            if (!fv.building_height_m) fv.building_height_m = b.height_m;
            if (!fv.footprint_area_m2) fv.footprint_area_m2 = geom::polygon_area(b.footprint);
        }
        p["pitch_deg"] = pitch::predict_pitch(fv, ctx.site->lat, *ctx.model);
        p["pitch_source"] = "predicted";
    });
}

/// Maximum module count per section.
inline json stage_pack(json sections, const Context& ctx) {
    return detail::per_section(std::move(sections), ctx, "pack", [&](json& f) {
        const roofs::RoofSection s = ingest::section_from_feature(f);
        static const std::vector<roofs::RoofObject> none;
        auto it = ctx.objects_by_section.find(s.id);
        const auto& objs = it == ctx.objects_by_section.end() ? none : it->second;
        const packing::PanelLayout layout = packing::pack_panels(s, objs, ctx.cfg.panel, ctx.cfg.packing);
        json& p = f["properties"];
        p["n_modules"] = packing::max_module_count(layout);
        p["panel_orientation"] =
            layout.placements.empty() ? "none" : packing::to_string(layout.placements.front().orientation);
    });
}

/// Horizon mask and sky-view factor per section.
inline json stage_shade(json sections, const Context& ctx) {
    return detail::per_section(std::move(sections), ctx, "shade", [&](json& f) {
        const roofs::RoofSection s = ingest::section_from_feature(f);
        const roofs::Building* b = detail::building_for(ctx, f, "shade");
        if (!b) return;
        const HorizonMask m = shading::section_mask(s, *b, ctx.index, ctx.dem ? &*ctx.dem : nullptr, ctx.cfg.shading);
        json& p = f["properties"];
        p["horizon_deg"] = m.gamma_deg;
        p["svf"] = sky_view_factor(m);
    });
}

inline HorizonMask mask_from_properties(const json& f) {
    const json& p = f["properties"];
    if (!p.contains("horizon_deg")) throw StateError("section has no horizon mask; run the shade stage first");
    if (!p["horizon_deg"].is_array()) throw SchemaError("horizon_deg must be an array");
    std::vector<double> g;
    for (const json& v : p["horizon_deg"]) {
        if (!v.is_number()) throw SchemaError("horizon_deg must hold numbers");
        g.push_back(v.get<double>());
    }
    HorizonMask m;
    m.gamma_deg = std::move(g);
    validate(m);
    return m;
}

/// Annual specific yield and the section's potential.
inline json stage_pvout(json sections, const Context& ctx) {
    if (!ctx.weather || !ctx.track) throw StateError("pvout stage needs weather");
    return detail::per_section(std::move(sections), ctx, "pvout", [&](json& f) {
        const roofs::RoofSection s = ingest::section_from_feature(f);
        if (!s.pitch_deg || !s.azimuth_deg) throw StateError("section lacks pitch or azimuth");
        json& p = f["properties"];
        if (!p.contains("n_modules") || !p["n_modules"].is_number())
            throw StateError("section has no module count; run the pack stage first");
        const HorizonMask m = mask_from_properties(f);
        const solar::PvoutResult r = solar::pvout_annual(*ctx.weather, *ctx.track, m, *s.pitch_deg, *s.azimuth_deg, ctx.cfg.pv);
        p["pvout_kwh_per_kwp"] = r.pvout_kwh_per_kwp;
        p["pvout_direct"] = r.pvout_direct;
        p["pvout_diffuse"] = r.pvout_diffuse;
        p["potential_kwh_per_year"] =
            potential_kwh_per_year(p["n_modules"].get<double>(), ctx.cfg.panel.power_wp, r.pvout_kwh_per_kwp);
    });
}

/// Top-level members the stages preserve on their output.
inline json with_frame(json sections, const Context& ctx) {
    sections["crs_local"] = true;
    if (ctx.layers.origin) sections["origin"] = {ctx.layers.origin->lon, ctx.layers.origin->lat};
    detail::sort_features(sections);
    return sections;
}

inline json run_all(const Context& ctx) {
    json s = with_frame(ctx.layers.sections, ctx);
    s = stage_regularize(std::move(s), ctx);
    s = stage_azimuth(std::move(s), ctx);
    s = stage_pitch(std::move(s), ctx);
    s = stage_pack(std::move(s), ctx);
    s = stage_shade(std::move(s), ctx);
    return stage_pvout(std::move(s), ctx);
}

// ---------------------------------------------------------------------------
// Summary and aggregation.

struct RunStats {
    std::size_t sections = 0;
    std::size_t errors = 0;
    double error_fraction() const { return sections ? static_cast<double>(errors) / sections : 0.0; }
};

inline RunStats stats(const json& report) {
    RunStats s;
    for (const json& f : report["features"]) {
        ++s.sections;
        s.errors += has_error(f);
    }
    return s;
}

inline json config_to_json(const RunConfig& c) {
    json j;
    j["panel"] = {{"width_m", c.panel.width_m},
                  {"height_m", c.panel.height_m},
                  {"power_wp", c.panel.power_wp},
                  {"edge_margin_m", c.panel.edge_margin_m},
                  {"inter_row_gap_m", c.panel.inter_row_gap_m},
                  {"inter_col_gap_m", c.panel.inter_col_gap_m}};
    j["packing"] = {{"offset_step_m", c.packing.offset_step_m}, {"ridge_buffer_m", c.packing.ridge_buffer_m}};
    j["pv"] = {{"pdc0_w", c.pv.pdc0_w},
               {"gamma_pdc_per_degC", c.pv.gamma_pdc_per_degC},
               {"noct_degC", c.pv.noct_degC},
               {"inv_eff_nom", c.pv.inv_eff_nom},
               {"dc_ac_ratio", c.pv.dc_ac_ratio},
               {"system_loss_fraction", c.pv.system_loss_fraction},
               {"albedo", c.pv.albedo}};
    j["shading"] = {{"n_sectors", c.shading.n_sectors},
                    {"building_max_dist_m", c.shading.building_max_dist_m},
                    {"dem_max_dist_m", c.shading.dem_max_dist_m},
                    {"min_gamma_deg", c.shading.min_gamma_deg},
                    {"flat_roof_azimuth_deg", c.azimuth.flat_roof_azimuth_deg}};
    if (c.shading.dem_step_m) j["shading"]["dem_step_m"] = *c.shading.dem_step_m;
    json paths = json::object();
    auto put = [&](const char* k, const std::optional<std::string>& v) {
        if (v) paths[k] = *v;
    };
    put("buildings", c.paths.buildings);
    put("sections", c.paths.sections);
    put("objects", c.paths.objects);
    put("weather", c.paths.weather);
    put("dem", c.paths.dem);
    put("pitch_model", c.paths.pitch_model);
    put("report", c.paths.report);
    put("summary", c.paths.summary);
    put("masks_dir", c.paths.masks_dir);
    j["paths"] = paths;
    j["workers"] = c.workers;
    j["seed"] = c.seed;
    j["max_error_fraction"] = c.max_error_fraction;
    if (c.site) j["site"] = {{"latitude", c.site->lat}, {"longitude", c.site->lon}};
    return j;
}

inline json summary(const json& report, const Context& ctx, double seconds) {
    const RunStats st = stats(report);
    double total = 0.0;
    std::uint64_t modules = 0;
    json errors = json::array();
    json warnings = ctx.warnings;
    if (report.contains("warnings"))
        for (const json& w : report["warnings"]) warnings.push_back(w);
    for (const json& f : report["features"]) {
        const json& p = f["properties"];
        if (has_error(f)) {
            errors.push_back({{"id", detail::section_id(f)}, {"error", p["error"]}});
            continue;
        }
        if (p.contains("potential_kwh_per_year")) total += p["potential_kwh_per_year"].get<double>();
        if (p.contains("n_modules")) modules += p["n_modules"].get<std::uint64_t>();
    }
    return {{"version", kVersion},
            {"sections", st.sections},
            {"errors", st.errors},
            {"error_records", errors},
            {"warnings", warnings},
            {"n_modules_total", modules},
            {"potential_kwh_per_year_total", total},
            {"config", config_to_json(ctx.cfg)},
            {"timing_s", seconds}};
}

/// Sums section potentials on a square grid anchored at the lowest section
/// centroid. Cells are emitted in (row, column) order.
inline json aggregate(const json& report, double cell_size_m) {
    if (!(cell_size_m > 0.0)) throw ArgumentError("aggregate: cell size must be > 0");
    struct Item {
        geom::Point2 c;
        std::string building;
        double potential;
    };
    std::vector<Item> items;
    for (const json& f : report["features"]) {
        if (has_error(f)) continue;
        const json& p = f["properties"];
        if (!p.contains("potential_kwh_per_year")) continue;
        items.push_back({geom::centroid(ingest::polygon_from_feature(f)), detail::building_of(f),
                         p["potential_kwh_per_year"].get<double>()});
    }
    json out = ingest::empty_collection();
    for (const char* k : {"crs_local", "origin"})
        if (report.contains(k)) out[k] = report[k];
    if (items.empty()) return out;
    double x0 = items[0].c.x, y0 = items[0].c.y;
    for (const Item& it : items) x0 = std::min(x0, it.c.x), y0 = std::min(y0, it.c.y);
    struct Cell {
        double potential = 0.0;
        std::set<std::string> buildings;
        std::size_t sections = 0;
    };
    std::map<std::pair<long, long>, Cell> cells;
    for (const Item& it : items) {
        const long i = static_cast<long>(std::floor((it.c.x - x0) / cell_size_m));
        const long j = static_cast<long>(std::floor((it.c.y - y0) / cell_size_m));
        Cell& c = cells[{j, i}];
        c.potential += it.potential;
        c.buildings.insert(it.building);
        ++c.sections;
    }
    for (const auto& [key, c] : cells) {
        const auto [j, i] = key;
        const double ax = x0 + i * cell_size_m, ay = y0 + j * cell_size_m;
        json f = {{"type", "Feature"},
                  {"geometry", ingest::polygon_to_geometry(geom::make_polygon(
                                   {{ax, ay}, {ax + cell_size_m, ay}, {ax + cell_size_m, ay + cell_size_m}, {ax, ay + cell_size_m}}))},
                  {"properties",
                   {{"id", std::to_string(i) + "_" + std::to_string(j)},
                    {"potential_kwh_per_year", c.potential},
                    {"building_count", c.buildings.size()},
                    {"section_count", c.sections}}}};
        out["features"].push_back(std::move(f));
    }
    return out;
}

}  // namespace solarpot::pipeline
