#include <gtest/gtest.h>

#include <random>

#include "solarpot/shading.hpp"
#include "support/random_shapes.hpp"

using namespace solarpot;
using namespace solarpot::shading;
using geom::Point2;
using testing_support::rect;

namespace {

roofs::Building building(std::string id, const geom::Polygon2& fp, double height, double ground = 0.0) {
    return {std::move(id), fp, height, ground};
}

double gamma_at(const HorizonMask& m, double azimuth) {
    return m.gamma_deg[static_cast<std::size_t>(m.sector_of(azimuth))];
}

std::vector<roofs::Building> random_city(std::mt19937_64& rng, int n, double extent) {
    std::uniform_real_distribution<double> pos(-extent, extent), size(5.0, 25.0), h(3.0, 40.0), ang(0.0, 90.0);
    std::vector<roofs::Building> out;
    for (int i = 0; i < n; ++i) {
        const double cx = pos(rng), cy = pos(rng), w = size(rng), d = size(rng);
        const auto fp = geom::make_polygon(geom::rotate_ring(rect(cx - w / 2, cy - d / 2, cx + w / 2, cy + d / 2).exterior,
                                                             ang(rng), {cx, cy}));
        out.push_back(building("b" + std::to_string(i), fp, h(rng), pos(rng) * 0.01));
    }
    return out;
}

HorizonMask floored(HorizonMask m, double floor_deg) {
    for (double& g : m.gamma_deg)
        if (g < floor_deg) g = 0.0;
    return m;
}

DemRaster flat_dem(int n, double cell, double z) {
    DemRaster d;
    d.origin = {-n * cell / 2.0, -n * cell / 2.0};
    d.cell_size_m = cell;
    d.n_cols = d.n_rows = n;
    d.elevation_m.assign(static_cast<std::size_t>(n) * n, z);
    return d;
}

}  // namespace

TEST(BuildingHorizon, EmptyIndexGivesOpenSky) {
    const SpatialIndex idx;
    EXPECT_EQ(building_horizon({0, 0}, 10.0, idx), HorizonMask(72));
}

TEST(BuildingHorizon, SingleOccluderDueSouth) {
    // north face at y = -10, roof 10 m above the evaluation height
    const SpatialIndex idx({building("a", rect(-1, -14, 1, -10), 20.0)});
    const HorizonMask m = building_horizon({0, 0}, 10.0, idx);
    // the sector's central ray is at most half a sector off due south
    const double expected = geom::rad2deg(std::atan2(10.0, 10.0 / std::cos(geom::deg2rad(2.5))));
    EXPECT_NEAR(gamma_at(m, 180.0), expected, 1e-9);
    EXPECT_NEAR(gamma_at(m, 179.0), expected, 1e-9);
    EXPECT_NEAR(expected, 45.0, 0.1);
    for (int i = 0; i < 72; ++i) {
        const double c = m.sector_center_deg(i);
        if (std::abs(c - 180.0) > 10.0) EXPECT_EQ(m.gamma_deg[static_cast<std::size_t>(i)], 0.0) << c;
    }
}

TEST(BuildingHorizon, MaxOverOccluders) {
    // two walls across the south sector, seen at 30 and 50 degrees on the central ray
    const double t = 10.0;
    const double c = std::cos(geom::deg2rad(2.5));
    const double h30 = std::tan(geom::deg2rad(30.0)) * (t / c), h50 = std::tan(geom::deg2rad(50.0)) * (2 * t / c);
    const SpatialIndex idx({building("near", rect(-3, -t - 1, 3, -t), h30), building("far", rect(-6, -2 * t - 1, 6, -2 * t), h50)});
    EXPECT_NEAR(gamma_at(building_horizon({0, 0}, 0.0, idx), 178.0), 50.0, 1e-9);
}

TEST(BuildingHorizon, OwnBuildingExcludedAndLowBuildingsIgnored) {
    const SpatialIndex idx({building("self", rect(-5, -5, 5, 5), 30.0), building("low", rect(10, -5, 20, 5), 5.0)});
    HorizonOptions o;
    o.exclude_id = "self";
    EXPECT_EQ(building_horizon({0, 0}, 10.0, idx, o), HorizonMask(72));
}

TEST(BuildingHorizon, CourtyardWallsCount) {
    // standing in a courtyard, the inner walls surround the point
    const auto fp = geom::make_polygon(rect(-20, -20, 20, 20).exterior, {rect(-10, -10, 10, 10).exterior});
    const SpatialIndex idx({building("ring", fp, 10.0)});
    const HorizonMask m = building_horizon({0, 0}, 0.0, idx);
    for (double g : m.gamma_deg) {
        EXPECT_GT(g, 35.0);
        EXPECT_LE(g, 45.0 + 1e-9);
    }
}

TEST(Prefilter, Examples) {
    const SpatialIndex idx({building("low", rect(10, 0, 20, 10), 5.0), building("far", rect(1000, 0, 1010, 10), 13.0),
                            building("near", rect(20, 20, 30, 30), 15.0)});
    auto ids = [&](const std::vector<std::size_t>& v) {
        std::vector<std::string> out;
        for (auto i : v) out.push_back(idx.buildings()[i].id);
        return out;
    };
    EXPECT_EQ(ids(prefilter_buildings(idx, {0, 0}, 10.0, 1.0, 2000.0)), std::vector<std::string>{"near"});
    EXPECT_EQ(ids(prefilter_buildings(idx, {0, 0}, 10.0, 0.1, 2000.0)), (std::vector<std::string>{"far", "near"}));
}

TEST(Prefilter, MasksMatchBruteForceOnRandomCity) {
    std::mt19937_64 rng(2024);
    const SpatialIndex idx(random_city(rng, 200, 400.0));
    std::uniform_real_distribution<double> pos(-400.0, 400.0), h(0.0, 30.0);
    HorizonOptions o;
    o.min_gamma_deg = 0.5;
    for (int k = 0; k < 60; ++k) {
        const Point2 p{pos(rng), pos(rng)};
        const double eh = h(rng);
        const HorizonMask fast = floored(building_horizon(p, eh, idx, o), 0.5);
        const HorizonMask brute = floored(building_horizon_brute_force(p, eh, idx, o), 0.5);
        EXPECT_EQ(fast, brute) << "point " << k;
    }
}

TEST(Prefilter, AddingABuildingNeverLowersTheHorizon) {
    std::mt19937_64 rng(5);
    auto city = random_city(rng, 50, 150.0);
    const Point2 p{3.0, -7.0};
    const HorizonMask before = building_horizon(p, 8.0, SpatialIndex(city));
    city.push_back(building("extra", rect(20, 20, 40, 30), 30.0));
    const HorizonMask after = building_horizon(p, 8.0, SpatialIndex(city));
    for (std::size_t i = 0; i < before.gamma_deg.size(); ++i) EXPECT_GE(after.gamma_deg[i], before.gamma_deg[i]);
    EXPECT_NE(after, before);
}

TEST(SpatialIndexQuery, NoFalseNegatives) {
    std::mt19937_64 rng(11);
    const auto city = random_city(rng, 300, 500.0);
    const SpatialIndex idx(city);
    std::uniform_real_distribution<double> pos(-500.0, 500.0), r(1.0, 200.0);
    for (int k = 0; k < 50; ++k) {
        const Point2 c{pos(rng), pos(rng)};
        const double rad = r(rng);
        const geom::Box2 q{{c.x - rad, c.y - rad}, {c.x + rad, c.y + rad}};
        std::vector<std::size_t> expected;
        for (std::size_t i = 0; i < city.size(); ++i)
            if (geom::bounds(city[i].footprint).intersects(q)) expected.push_back(i);
        EXPECT_EQ(idx.query(q), expected);
    }
}

TEST(BuildingHorizon, SmallMoveChangesGammaBoundedly) {
    // long wall 20 m south, 10 m above the evaluation height
    const SpatialIndex idx({building("wall", rect(-1000, -22, 1000, -20), 10.0)});
    const HorizonMask a = building_horizon({0, 0}, 0.0, idx);
    const HorizonMask b = building_horizon({0.6, -0.8}, 0.0, idx);
    const double bound = geom::rad2deg(1.0 / 19.0);
    for (std::size_t i = 0; i < a.gamma_deg.size(); ++i) EXPECT_LE(std::abs(a.gamma_deg[i] - b.gamma_deg[i]), bound);
}

TEST(DemHorizon, FlatTerrainIsOpen) {
    EXPECT_EQ(dem_horizon({0, 0}, 50.0, flat_dem(101, 10.0, 50.0)), HorizonMask(72));
}

TEST(DemHorizon, RidgeToTheEast) {
    DemRaster d = flat_dem(301, 10.0, 0.0);
    // north-south ridge 100 m high, 1000 m east of the center (column 250)
    for (int r = 0; r < d.n_rows; ++r) d.elevation_m[static_cast<std::size_t>(r) * d.n_cols + 250] = 100.0;
    const HorizonMask m = dem_horizon({0, 0}, 0.0, d, 72, 1400.0);
    // sector centers are 2.5 degrees off due east, which stretches the ray to the ridge a little
    EXPECT_NEAR(gamma_at(m, 90.0), geom::rad2deg(std::atan(0.1)), 0.1);
    EXPECT_EQ(gamma_at(m, 270.0), 0.0);
    EXPECT_EQ(gamma_at(m, 0.0), 0.0);
}

TEST(DemHorizon, ConeMatchesAnalyticSlope) {
    const double s = 0.2;
    DemRaster d = flat_dem(401, 5.0, 0.0);
    for (int r = 0; r < d.n_rows; ++r)
        for (int c = 0; c < d.n_cols; ++c) {
            const double x = d.origin.x + (c + 0.5) * d.cell_size_m;
            const double y = d.origin.y + d.height() - (r + 0.5) * d.cell_size_m;
            d.elevation_m[static_cast<std::size_t>(r) * d.n_cols + c] = s * std::hypot(x, y);
        }
    const HorizonMask m = dem_horizon({0, 0}, 0.0, d, 72, 900.0);
    for (double g : m.gamma_deg) EXPECT_NEAR(g, geom::rad2deg(std::atan(s)), 0.2);
}

TEST(DemHorizon, NodataIsTransparentAndBoundsAreChecked) {
    DemRaster d = flat_dem(101, 10.0, 0.0);
    for (int r = 0; r < d.n_rows; ++r) d.elevation_m[static_cast<std::size_t>(r) * d.n_cols + 80] = d.nodata;
    EXPECT_EQ(dem_horizon({0, 0}, 0.0, d), HorizonMask(72));
    EXPECT_THROW(dem_horizon({5000, 0}, 0.0, d), OutOfBoundsError);
    EXPECT_THROW(dem_horizon({0, 0}, 0.0, d, 72, 1000.0, 2.0), ArgumentError);
}

TEST(CombineMasks, Properties) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> g(0.0, 90.0);
    auto random_mask = [&] {
        HorizonMask m(36);
        for (double& x : m.gamma_deg) x = g(rng);
        return m;
    };
    for (int k = 0; k < 50; ++k) {
        const HorizonMask a = random_mask(), b = random_mask(), c = random_mask();
        EXPECT_EQ(combine_masks(a, HorizonMask(36)), a);
        EXPECT_EQ(combine_masks(a, a), a);
        EXPECT_EQ(combine_masks(a, b), combine_masks(b, a));
        EXPECT_EQ(combine_masks(combine_masks(a, b), c), combine_masks(a, combine_masks(b, c)));
        const HorizonMask ab = combine_masks(a, b);
        for (std::size_t i = 0; i < ab.gamma_deg.size(); ++i) EXPECT_GE(ab.gamma_deg[i], a.gamma_deg[i]);
    }
    EXPECT_THROW(combine_masks(HorizonMask(36), HorizonMask(72)), ArgumentError);
}
