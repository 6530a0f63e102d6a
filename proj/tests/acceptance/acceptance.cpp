// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "oracles/ephemeris_table.hpp"
#include "oracles/ols_oracle.hpp"
#include "oracles/packing_oracle.hpp"
#include "solarpot/solarpot.hpp"
#include "support/pitch_data.hpp"
#include "support/random_shapes.hpp"
#include "support/roof_shapes.hpp"

using namespace solarpot;
using geom::Point2;
using geom::Polygon2;
using nlohmann::json;
using testing_support::rect;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = SOLARPOT_FIXTURES;
const std::string kCli = SOLARPOT_CLI;

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int prec = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << x;
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "solarpot_acceptance";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

int cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

double angular_diff(double a, double b, double period = 360.0) {
    const double d = geom::wrap_angle(a - b, period);
    return std::min(d, period - d);
}

// ---------------------------------------------------------------------------
// 1, 2: orientation and tilt sensitivity on the clear-sky fixture year.

struct ClearSky {
    solar::WeatherSeries weather;
    solar::SolarTrack track;
};

const ClearSky& clearsky() {
    static const ClearSky c = [] {
        ClearSky out;
        out.weather = ingest::load_weather(kFixtures + "/weather_clearsky.csv", 43.6, 3.87);
        out.track = solar::solar_track(out.weather);
        return out;
    }();
    return c;
}

double pvout(double tilt, double az) {
    return solar::pvout_annual(clearsky().weather, clearsky().track, HorizonMask{}, tilt, az, {}).pvout_kwh_per_kwp;
}

Outcome azimuth_sensitivity() {
    const auto t0 = Clock::now();
    const double south = pvout(37, 180), east = pvout(37, 90);
    const double drop = 1.0 - east / south, secs = since(t0);
    return {drop >= 0.17 && drop <= 0.33 && secs < 5.0,
            "south " + fmt(south, 1) + ", east " + fmt(east, 1) + " kWh/kWp, east is " + fmt(100 * drop, 1) +
                "% lower (17-33%), " + fmt(secs, 2) + " s"};
}

Outcome pitch_sensitivity() {
    const auto t0 = Clock::now();
    const double p37 = pvout(37, 180), p27 = pvout(27, 180), p47 = pvout(47, 180);
    const double d27 = std::abs(p27 - p37) / p37, d47 = std::abs(p47 - p37) / p37, secs = since(t0);
    return {d27 <= 0.02 && d47 <= 0.02 && secs < 5.0,
            "|d| 37->27 " + fmt(100 * d27, 2) + "%, 37->47 " + fmt(100 * d47, 2) + "% (<= 2%), " + fmt(secs, 2) + " s"};
}

// ---------------------------------------------------------------------------
// 3: STC anchor.

Outcome stc_identity() {
    int bad = 0;
    for (double pdc0 : {1.0, 400.0, 1000.0, 4321.5, 1e6})
        for (double gamma : {-0.004, -0.0035, 0.0})
            if (solar::pvwatts_dc(1000.0, 25.0, pdc0, gamma) != pdc0) ++bad;
    return {bad == 0, std::to_string(bad) + " of 15 (pdc0, gamma) pairs differ from pdc0"};
}

// ---------------------------------------------------------------------------
// 4: sky-view factor against cosine-weighted Monte Carlo.

// A uniform point on the unit disk at radius r is a cosine-weighted direction
// with cos(elevation) = r; it sees sky when r < cos(gamma) of its sector.
double monte_carlo_svf(const HorizonMask& m, int samples, std::mt19937_64& rng) {
    std::vector<double> cos_g;
    for (double g : m.gamma_deg) cos_g.push_back(std::cos(g * geom::kPi / 180.0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double n = static_cast<double>(m.n_sectors());
    long visible = 0;
    for (int i = 0; i < samples; ++i) {
        const double r2 = u(rng);
        const auto k = std::min(static_cast<std::size_t>(u(rng) * n), cos_g.size() - 1);
        if (r2 < cos_g[k] * cos_g[k]) ++visible;
    }
    return static_cast<double>(visible) / samples;
}

Outcome svf_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int sector_counts[] = {8, 36, 72, 144};
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        HorizonMask m(sector_counts[k % 4]);
        const double top = 90.0 * u(rng);
        for (double& g : m.gamma_deg) g = u(rng) < 0.3 ? 0.0 : top * u(rng);
        worst = std::max(worst, std::abs(sky_view_factor(m) - monte_carlo_svf(m, 1'000'000, rng)));
    }
    const double uniform = std::abs(sky_view_factor(HorizonMask(72, 30.0)) - 0.75);
    const double secs = since(t0);
    return {worst <= 0.01 && uniform <= 1e-9 && secs < 60.0,
            "worst |svf - MC| " + fmt(worst, 5) + " over 200 masks (<= 0.01), uniform 30 deg off by " +
                fmt(uniform, 12) + ", " + fmt(secs, 1) + " s"};
}

// ---------------------------------------------------------------------------
// 5: solar position.

Outcome ephemeris() {
    double worst = 0.0;
    int n = 0, bad = 0;
    for (const auto& row : oracle::kEphemeris) {
        const auto p = solar::solar_position(solar::parse_timestamp(row.utc), row.latitude_deg, row.longitude_deg);
        const double err = std::abs(p.elevation_deg - row.elevation_deg);
        worst = std::max(worst, err);
        bad += err > 0.3;
        ++n;
    }
    return {bad == 0, std::to_string(n) + " instants, worst elevation error " + fmt(worst, 4) + " deg (<= 0.3)"};
}

// ---------------------------------------------------------------------------
// 6: packing.

std::vector<oracle::Loop> loops(const Polygon2& p) {
    std::vector<oracle::Loop> out;
    auto add = [&](const geom::Ring& r) {
        oracle::Loop l;
        for (Point2 q : r) l.push_back({q.x, q.y});
        out.push_back(l);
    };
    add(p.exterior);
    for (const auto& h : p.holes) add(h);
    return out;
}

std::string audit(const packing::PanelLayout& layout, const packing::PanelSpec& spec) {
    std::vector<oracle::AxisBox> panels;
    for (const auto& p : layout.placements) {
        const auto r = packing::panel_rect(p, spec);
        panels.push_back({r.center.x - r.half_extent_u, r.center.y - r.half_extent_v, r.center.x + r.half_extent_u,
                          r.center.y + r.half_extent_v});
    }
    std::vector<std::vector<oracle::Loop>> obs;
    for (const auto& o : layout.obstacles) obs.push_back(loops(o));
    for (const auto& z : layout.ridge_zones) obs.push_back(loops(z.to_polygon()));
    return oracle::audit_layout(loops(layout.plane_polygon), spec.edge_margin_m, panels, obs);
}

Outcome packing_suite() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    int violations = 0;
    long placed = 0;
    for (int i = 0; i < 1000; ++i) {
        roofs::RoofSection s = testing_support::plan_section(
            "s" + std::to_string(i), testing_support::random_star(rng, {0, 0}, 3.0, 10.0, 5 + i % 6));
        s.pitch_deg = 45.0 * u(rng);
        s.azimuth_deg = 360.0 * u(rng);
        if (i % 2) s.ridge_segments.push_back({{-6.0 * u(rng), -1.0 + 2 * u(rng)}, {6.0 * u(rng), -1.0 + 2 * u(rng)}});
        std::vector<roofs::RoofObject> objs;
        for (int k = 0; k < 1 + i % 3; ++k) {
            const double cx = -4 + 8 * u(rng), cy = -4 + 8 * u(rng);
            objs.push_back({"o" + std::to_string(k), s.id, rect(cx, cy, cx + 0.4 + 1.2 * u(rng), cy + 0.4 + 1.2 * u(rng)),
                            roofs::ObjectKind::chimney});
        }
        packing::PanelSpec spec;
        spec.edge_margin_m = 0.4 * u(rng);
        spec.inter_row_gap_m = 0.05 * u(rng);
        spec.inter_col_gap_m = 0.05 * u(rng);
        const auto layout = packing::pack_panels(s, objs, spec);
        placed += static_cast<long>(layout.placements.size());
        if (!audit(layout, spec).empty()) ++violations;
    }

    int closed_form_misses = 0;
    std::uniform_real_distribution<double> len(2.5, 25.0), margin(0.0, 0.6), gap(0.0, 0.1);
    for (int i = 0; i < 100; ++i) {
        const double W = len(rng), H = len(rng);
        packing::PanelSpec spec;
        spec.width_m = 1.722, spec.height_m = 1.134;
        spec.edge_margin_m = margin(rng), spec.inter_row_gap_m = gap(rng), spec.inter_col_gap_m = gap(rng);
        const double w = W - 2 * spec.edge_margin_m, h = H - 2 * spec.edge_margin_m;
        const long land = packing::tiling_count(w, spec.width_m, spec.inter_col_gap_m) *
                          packing::tiling_count(h, spec.height_m, spec.inter_row_gap_m);
        const long port = packing::tiling_count(w, spec.height_m, spec.inter_col_gap_m) *
                          packing::tiling_count(h, spec.width_m, spec.inter_row_gap_m);
        const auto layout = packing::pack_plane(rect(0, 0, W, H), {}, {}, spec);
        if (static_cast<long>(packing::max_module_count(layout)) != std::max(land, port)) ++closed_form_misses;
    }

    packing::PanelSpec two_by_one;
    two_by_one.width_m = 2.0, two_by_one.height_m = 1.0;
    two_by_one.edge_margin_m = two_by_one.inter_row_gap_m = two_by_one.inter_col_gap_m = 0.0;
    const auto obstacle_layout = packing::pack_plane(rect(0, 0, 10, 6), {rect(4, 2, 6, 4)}, {}, two_by_one);
    const int got = static_cast<int>(packing::max_module_count(obstacle_layout));
    const int expected = oracle::exhaustive_offset_count(10, 6, {{4, 2, 6, 4}}, 2.0, 1.0, 0.0, 0.0, 0.01);

    const double secs = since(t0);
    return {violations == 0 && closed_form_misses == 0 && got == expected && secs < 120.0,
            "(a) " + std::to_string(violations) + " invalid layouts of 1000 (" + std::to_string(placed) +
                " panels), (b) " + std::to_string(closed_form_misses) + " closed-form misses of 100, (c) " +
                std::to_string(got) + " vs oracle " + std::to_string(expected) + ", " + fmt(secs, 1) + " s"};
}

// ---------------------------------------------------------------------------
// 7: azimuth geometry.

Outcome azimuth_geometry() {
    const std::map<std::string, double> truth{{"s", 180.0}, {"n", 0.0}, {"e", 90.0}, {"w", 270.0}};
    std::mt19937_64 rng(36);
    std::uniform_real_distribution<double> angle(0.0, 360.0);
    int cases = 0, right = 0;
    double worst_bb = 0.0;
    for (int k = 0; k < 36; ++k) {
        const double rot = angle(rng);
        for (const auto& secs : {testing_support::gable(rot), testing_support::hipped(rot)}) {
            for (const auto& s : secs) {
                // counter-clockwise rotation by rot lowers compass bearings by rot
                const double want = geom::wrap_angle(truth.at(s.id) - rot);
                const double az = roofs::estimate_azimuth(s, secs);
                ++cases;
                right += angular_diff(az, want) < 1.0;
                worst_bb = std::max(worst_bb, angular_diff(roofs::bbox_bearing(s.plan_polygon), want, 90.0));
            }
        }
    }
    return {right == cases && worst_bb <= 1.0,
            std::to_string(right) + "/" + std::to_string(cases) + " sections face the right way, worst theta_bb error " +
                fmt(worst_bb, 6) + " deg (<= 1)"};
}

// ---------------------------------------------------------------------------
// 8: shading pre-filter and monotonicity.

std::vector<roofs::Building> random_city(std::mt19937_64& rng, int n, double extent) {
    std::uniform_real_distribution<double> pos(-extent, extent), size(5.0, 25.0), h(3.0, 40.0), ang(0.0, 90.0);
    std::vector<roofs::Building> out;
    for (int i = 0; i < n; ++i) {
        const double cx = pos(rng), cy = pos(rng), w = size(rng), d = size(rng);
        const auto fp = testing_support::rotated(rect(cx - w / 2, cy - d / 2, cx + w / 2, cy + d / 2), ang(rng), {cx, cy});
        out.push_back({"b" + std::to_string(i), fp, h(rng), pos(rng) * 0.01});
    }
    return out;
}

HorizonMask floored(HorizonMask m, double floor_deg) {
    for (double& g : m.gamma_deg)
        if (g < floor_deg) g = 0.0;
    return m;
}

ingest::RunConfig fixture_config(unsigned workers) {
    ingest::RunConfig c = ingest::load_config(kFixtures + "/config.json");
    c.workers = workers;
    return c;
}

const pipeline::LoadOptions kAll{.weather = true, .dem = true, .pitch_model = true};

Outcome shading_prefilter() {
    std::mt19937_64 rng(2024);
    const shading::SpatialIndex idx(random_city(rng, 200, 400.0));
    std::uniform_real_distribution<double> pos(-450.0, 450.0), h(0.0, 35.0);
    shading::HorizonOptions o;
    o.min_gamma_deg = 0.5;
    int mismatched = 0;
    const int points = 200;
    for (int k = 0; k < points; ++k) {
        const Point2 p{pos(rng), pos(rng)};
        const double eh = h(rng);
        if (floored(shading::building_horizon(p, eh, idx, o), 0.5) !=
            floored(shading::building_horizon_brute_force(p, eh, idx, o), 0.5))
            ++mismatched;
    }

    // one extra tower next to the fixture buildings
    const ingest::RunConfig cfg = fixture_config(1);
    json buildings = ingest::read_json_file(*cfg.paths.buildings);
    const json before = pipeline::run_all(pipeline::make_context(cfg, std::nullopt, kAll));
    buildings["features"].push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "Polygon"}, {"coordinates", {{{20, 14}, {30, 14}, {30, 26}, {20, 26}, {20, 14}}}}}},
         {"properties", {{"id", "extra"}, {"height_m", 30.0}, {"ground_elev_m", 40.0}}}});
    const fs::path path = scratch("buildings_plus_one.geojson");
    ingest::write_json_file(path.string(), buildings);
    ingest::RunConfig plus = cfg;
    plus.paths.buildings = path.string();
    const json after = pipeline::run_all(pipeline::make_context(plus, std::nullopt, kAll));

    int lowered = 0, raised = 0, changed = 0;
    const auto& fb = before["features"];
    const auto& fa = after["features"];
    const bool aligned = fb.size() == fa.size();
    for (std::size_t i = 0; aligned && i < fb.size(); ++i) {
        const json& pb = fb[i]["properties"];
        const json& pa = fa[i]["properties"];
        if (!pb.contains("horizon_deg") || !pa.contains("horizon_deg")) continue;
        for (std::size_t k = 0; k < pb["horizon_deg"].size(); ++k)
            lowered += pa["horizon_deg"][k].get<double>() < pb["horizon_deg"][k].get<double>();
        const double vb = pb["pvout_kwh_per_kwp"].get<double>(), va = pa["pvout_kwh_per_kwp"].get<double>();
        raised += va > vb;
        changed += va != vb;
    }
    return {mismatched == 0 && aligned && lowered == 0 && raised == 0,
            std::to_string(mismatched) + "/" + std::to_string(points) +
                " masks differ from brute force; extra building: " + std::to_string(lowered) + " sectors lowered, " +
                std::to_string(raised) + " sections gained PVout, " + std::to_string(changed) + " sections shaded more"};
}

// ---------------------------------------------------------------------------
// 9: random forest.

Outcome forest() {
    using namespace solarpot::pitch;
    const auto train = testing_support::synthetic_tabular(500, 11);
    const auto test = testing_support::synthetic_tabular(500, 12);
    const FeatureEncoder enc = FeatureEncoder::fit(train.features);
    const Table t = enc.encode_all(train.features);

    ForestParams params;
    params.seed = 123;
    std::vector<Forest> forests;
    for (unsigned threads : {1u, 4u, 16u}) {
        params.threads = threads;
        forests.push_back(train_forest(t, train.targets, params));
    }
    int differing = 0;
    for (const auto& f : test.features) {
        const auto x = enc.encode(f);
        const double p = forests[0].predict(x);
        differing += forests[1].predict(x) != p || forests[2].predict(x) != p;
    }

    std::vector<std::vector<double>> X;
    for (const auto& f : train.features) {
        const auto x = enc.encode(f);
        X.push_back({1.0, x[0], x[1], x[2], x[3], x[4]});
    }
    const auto beta = oracle::least_squares(X, train.targets);
    double mae_forest = 0, mae_ols = 0;
    for (std::size_t i = 0; i < test.features.size(); ++i) {
        const auto x = enc.encode(test.features[i]);
        double ols = beta[0];
        for (std::size_t k = 0; k < 5; ++k) ols += beta[k + 1] * x[k];
        mae_forest += std::abs(forests[0].predict(x) - test.targets[i]);
        mae_ols += std::abs(ols - test.targets[i]);
    }
    mae_forest /= static_cast<double>(test.features.size());
    mae_ols /= static_cast<double>(test.features.size());
    return {differing == 0 && mae_forest < mae_ols,
            std::to_string(differing) + " of 500 predictions differ across 1/4/16 threads; MAE forest " +
                fmt(mae_forest, 3) + " vs OLS " + fmt(mae_ols, 3)};
}

// ---------------------------------------------------------------------------
// 10: pipeline determinism and scale.

// Rows without errors must carry the potential, and it must be the product.
int identity_violations(const json& report, double power_wp, int& rows) {
    int bad = 0;
    for (const json& f : report["features"]) {
        if (pipeline::has_error(f)) continue;
        ++rows;
        const json& p = f["properties"];
        if (!p.contains("potential_kwh_per_year") || !p.contains("n_modules") || !p.contains("pvout_kwh_per_kwp")) {
            ++bad;
            continue;
        }
        const double want = p["n_modules"].get<double>() * (power_wp / 1000.0) * p["pvout_kwh_per_kwp"].get<double>();
        const double got = p["potential_kwh_per_year"].get<double>();
        if (std::abs(got - want) > 1e-9 * std::max(1.0, std::abs(want))) ++bad;
    }
    return bad;
}

json ring_json(const geom::Ring& r) {
    json ring = json::array();
    for (Point2 p : r) ring.push_back({p.x, p.y});
    ring.push_back({r.front().x, r.front().y});
    return {ring};
}

json segment_json(const geom::Ring& two) { return {{two[0].x, two[0].y}, {two[1].x, two[1].y}}; }

json polygon_feature(const geom::Ring& r, json props) {
    return {{"type", "Feature"}, {"geometry", {{"type", "Polygon"}, {"coordinates", ring_json(r)}}}, {"properties", props}};
}

json collection(json features) {
    return {{"type", "FeatureCollection"}, {"crs_local", true}, {"origin", {3.87, 43.6}}, {"features", features}};
}

// 1000 buildings on a 32 m grid: gable, hipped and flat roofs, random
// orientation, pitch given for about half of them.
fs::path synthetic_city(int n) {
    std::mt19937_64 rng(1000);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const char* materials[] = {"tile", "slate", "metal"};
    json buildings = json::array(), sections = json::array();
    const int per_row = static_cast<int>(std::ceil(std::sqrt(n)));
    for (int i = 0; i < n; ++i) {
        const double cx = 32.0 * (i % per_row), cy = 32.0 * (i / per_row);
        const double w = 10.0 + 8.0 * u(rng), d = 6.0 + 6.0 * u(rng), rot = 180.0 * u(rng);
        const double x0 = cx - w / 2, x1 = cx + w / 2, y0 = cy - d / 2, y1 = cy + d / 2, ym = cy;
        const double kind = u(rng);
        const std::string bid = "c" + std::to_string(10000 + i);
        auto turn = [&](geom::Ring r) { return geom::rotate_ring(r, rot, {cx, cy}); };
        buildings.push_back(polygon_feature(turn(rect(x0, y0, x1, y1).exterior),
                                            {{"id", bid}, {"height_m", 4.0 + 20.0 * u(rng)}, {"ground_elev_m", 40.0}}));

        std::vector<std::pair<std::string, geom::Ring>> parts;
        json ridges = json::array();
        std::string shape;
        if (kind < 0.5) {
            shape = "gable";
            parts = {{"S", rect(x0, y0, x1, ym).exterior}, {"N", rect(x0, ym, x1, y1).exterior}};
            ridges.push_back(segment_json(turn({{x0, ym}, {x1, ym}})));
        } else if (kind < 0.8 && w > d + 1.0) {
            shape = "hipped";
            const double a = x0 + d / 2, b = x1 - d / 2;
            parts = {{"S", {{x0, y0}, {x1, y0}, {b, ym}, {a, ym}}},
                     {"N", {{a, ym}, {b, ym}, {x1, y1}, {x0, y1}}},
                     {"W", {{x0, y0}, {a, ym}, {x0, y1}}},
                     {"E", {{x1, y0}, {x1, y1}, {b, ym}}}};
            ridges.push_back(segment_json(turn({{a, ym}, {b, ym}})));
        } else {
            shape = "flat";
            parts = {{"R", rect(x0, y0, x1, y1).exterior}};
        }
        const bool given = u(rng) < 0.5;
        const std::string material = shape == "flat" ? "membrane" : materials[i % 3];
        for (const auto& [tag, ring] : parts) {
            json props = {{"id", bid + "-" + tag},
                          {"building_id", bid},
                          {"roof_material", material},
                          {"roof_type", shape == "flat" ? "commercial" : "residential"},
                          {"roof_shape", shape}};
            if (given) props["pitch_deg"] = shape == "flat" ? 0.0 : 20.0 + 25.0 * u(rng);
            if (!ridges.empty()) props["ridge_segments"] = ridges;
            sections.push_back(polygon_feature(turn(ring), props));
        }
    }
    const fs::path dir = scratch("city");
    fs::create_directories(dir);
    ingest::write_json_file((dir / "buildings.geojson").string(), collection(buildings));
    ingest::write_json_file((dir / "sections.geojson").string(), collection(sections));
    json cfg = json::parse(slurp(kFixtures + "/config.json"));
    cfg["paths"] = {{"buildings", "buildings.geojson"},
                    {"sections", "sections.geojson"},
                    {"weather", kFixtures + "/weather_clearsky.csv"},
                    {"pitch_model", kFixtures + "/pitch_model.json"}};
    ingest::write_json_file((dir / "config.json").string(), cfg);
    return dir;
}

Outcome pipeline_scale() {
    std::string first;
    bool identical = true, ok_rc = true;
    double slowest = 0.0;
    for (unsigned workers : {1u, 4u, 16u}) {
        const fs::path out = scratch("fixture_report_" + std::to_string(workers) + ".geojson");
        const auto t0 = Clock::now();
        ok_rc &= cli("run --config " + kFixtures + "/config.json --workers " + std::to_string(workers) + " --out " +
                     out.string()) == 0;
        slowest = std::max(slowest, since(t0));
        const std::string bytes = slurp(out);
        if (first.empty()) first = bytes;
        identical &= !bytes.empty() && bytes == first;
    }
    const double power_wp = fixture_config(1).panel.power_wp;
    int fixture_rows = 0;
    int bad = identity_violations(json::parse(first.empty() ? "{\"features\":[]}" : first), power_wp, fixture_rows);

    const fs::path city = synthetic_city(1000);
    const auto t0 = Clock::now();
    const int city_rc = cli("run --config " + (city / "config.json").string() + " --out " +
                            (city / "report.geojson").string());
    const double city_secs = since(t0);
    int city_rows = 0, city_errors = 0;
    if (fs::exists(city / "report.geojson")) {
        const json report = ingest::read_json_file((city / "report.geojson").string());
        bad += identity_violations(report, power_wp, city_rows);
        city_errors = static_cast<int>(pipeline::stats(report).errors);
    }
    return {identical && ok_rc && slowest < 10.0 && city_rc == 0 && city_secs < 600.0 && bad == 0 && city_rows > 0,
            std::string("fixture reports ") + (identical ? "identical" : "DIFFER") + " for 1/4/16 workers, slowest " +
                fmt(slowest, 2) + " s; city of 1000 buildings: exit " + std::to_string(city_rc) + ", " +
                fmt(city_secs, 1) + " s, " + std::to_string(city_rows) + " rows (" + std::to_string(city_errors) +
                " with errors); " + std::to_string(bad) + " identity violations over " +
                std::to_string(fixture_rows + city_rows) + " rows"};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"azimuth sensitivity", azimuth_sensitivity},
        {"pitch sensitivity", pitch_sensitivity},
        {"PVWatts STC identity", stc_identity},
        {"sky-view factor oracle", svf_oracle},
        {"solar position", ephemeris},
        {"packing", packing_suite},
        {"azimuth geometry", azimuth_geometry},
        {"shading pre-filter", shading_prefilter},
        {"random forest", forest},
        {"pipeline determinism and scale", pipeline_scale},
    };
    int failed = 0, n = 0;
    for (const auto& [name, check] : criteria) {
        ++n;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << n << " " << name << ": " << o.detail << std::endl;
    }
    std::cout << (n - failed) << "/" << n << " criteria pass" << std::endl;
    return failed == 0 ? 0 : 1;
}
