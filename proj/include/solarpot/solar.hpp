#pragma once

// Solar position, plane-of-array transposition, and the PVWatts-style chain
// from hourly weather to annual specific yield (kWh per kWp).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solarpot/error.hpp"
#include "solarpot/geom.hpp"
#include "solarpot/horizon.hpp"

namespace solarpot::solar {

using Timestamp = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DDTHH:MM:SS" with an optional trailing "Z" or "+00:00".
inline Timestamp parse_timestamp(std::string_view s) {
    int y, mo, d, h, mi, sec;
    char tail[8] = {};
    const std::string str(s);
    const int n = std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%7s", &y, &mo, &d, &h, &mi, &sec, tail);
    const std::string_view t(tail);
    if (n < 6 || !(t.empty() || t == "Z" || t == "+00:00"))
        throw FormatError("bad UTC timestamp '" + str + "'");
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 60 || h < 0 || mi < 0 || sec < 0)
        throw FormatError("bad UTC timestamp '" + str + "'");
    return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} + std::chrono::seconds{sec};
}

inline std::string format_timestamp(Timestamp t) {
    const auto day = std::chrono::floor<std::chrono::days>(t);
    const std::chrono::year_month_day ymd{day};
    const std::chrono::hh_mm_ss hms{t - day};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

struct SolarPosition {
    double zenith_deg = 90.0;
    double azimuth_deg = 0.0;  // clockwise from north
    double elevation_deg = 0.0;
};

/// NOAA formulation of the Meeus low-precision solar coordinates. Geometric
/// position (no refraction).
inline SolarPosition solar_position(Timestamp t, double latitude_deg, double longitude_deg) {
    using geom::deg2rad;
    using geom::rad2deg;
    const double unix_s = static_cast<double>(t.time_since_epoch().count());
    const double jd = unix_s / 86400.0 + 2440587.5;
    const double T = (jd - 2451545.0) / 36525.0;

    const double L0 = geom::wrap_angle(280.46646 + T * (36000.76983 + 0.0003032 * T));
    const double M = deg2rad(357.52911 + T * (35999.05029 - 0.0001537 * T));
    const double e = 0.016708634 - T * (0.000042037 + 0.0000001267 * T);
    const double C = std::sin(M) * (1.914602 - T * (0.004817 + 0.000014 * T)) +
                     std::sin(2 * M) * (0.019993 - 0.000101 * T) + std::sin(3 * M) * 0.000289;
    const double omega = deg2rad(125.04 - 1934.136 * T);
    const double lambda = deg2rad(L0 + C - 0.00569 - 0.00478 * std::sin(omega));
    const double eps0 = 23.0 + (26.0 + (21.448 - T * (46.815 + T * (0.00059 - T * 0.001813))) / 60.0) / 60.0;
    const double eps = deg2rad(eps0 + 0.00256 * std::cos(omega));
    const double decl = std::asin(std::sin(eps) * std::sin(lambda));

    const double y = std::pow(std::tan(eps / 2.0), 2);
    const double l0 = deg2rad(L0);
    const double eot_min = 4.0 * rad2deg(y * std::sin(2 * l0) - 2 * e * std::sin(M) +
                                         4 * e * y * std::sin(M) * std::cos(2 * l0) -
                                         0.5 * y * y * std::sin(4 * l0) - 1.25 * e * e * std::sin(2 * M));

    const double day_min = std::fmod(unix_s, 86400.0) / 60.0;
    const double tst = day_min + eot_min + 4.0 * longitude_deg;
    const double ha = deg2rad(tst / 4.0 - 180.0);
    const double lat = deg2rad(latitude_deg);

    const double cos_z = std::clamp(std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(ha),
                                    -1.0, 1.0);
    SolarPosition p;
    p.zenith_deg = rad2deg(std::acos(cos_z));
    p.elevation_deg = 90.0 - p.zenith_deg;
    p.azimuth_deg = geom::wrap_angle(
        rad2deg(std::atan2(std::sin(ha), std::cos(ha) * std::sin(lat) - std::tan(decl) * std::cos(lat))) + 180.0);
    return p;
}

inline double angle_of_incidence(double tilt_deg, double surface_azimuth_deg, const SolarPosition& sun) {
    using geom::deg2rad;
    const double z = deg2rad(sun.zenith_deg), b = deg2rad(tilt_deg);
    const double c = std::cos(z) * std::cos(b) +
                     std::sin(z) * std::sin(b) * std::cos(deg2rad(sun.azimuth_deg - surface_azimuth_deg));
    return geom::rad2deg(std::acos(std::clamp(c, -1.0, 1.0)));
}

struct WeatherRecord {
    Timestamp timestamp{};  // start of the hour
    double ghi = 0.0;
    double dni = 0.0;
    double dhi = 0.0;
    double temp_air = 15.0;
    double wind_speed = 2.0;
};

struct WeatherSeries {
    std::vector<WeatherRecord> records;
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
};

struct PvSystemConfig {
    double pdc0_w = 1000.0;
    double gamma_pdc_per_degC = -0.004;
    double noct_degC = 45.0;
    double inv_eff_nom = 0.96;
    double dc_ac_ratio = 1.1;
    double system_loss_fraction = 0.14;
    double albedo = 0.2;
};

inline void validate(const PvSystemConfig& c) {
    auto fraction = [](double v, const char* name, bool allow_zero) {
        if (!(allow_zero ? v >= 0.0 : v > 0.0) || !(v <= 1.0))
            throw ArgumentError(std::string("pv.") + name + " must be in " + (allow_zero ? "[0, 1]" : "(0, 1]"));
    };
    if (!(c.pdc0_w > 0.0)) throw ArgumentError("pv.pdc0_w must be > 0");
    if (!(c.gamma_pdc_per_degC < 0.0)) throw ArgumentError("pv.gamma_pdc_per_degC must be negative");
    if (!std::isfinite(c.noct_degC)) throw ArgumentError("pv.noct_degC must be finite");
    fraction(c.inv_eff_nom, "inv_eff_nom", false);
    if (!(c.dc_ac_ratio >= 1.0)) throw ArgumentError("pv.dc_ac_ratio must be >= 1");
    fraction(c.system_loss_fraction, "system_loss_fraction", true);
    fraction(c.albedo, "albedo", true);
}

struct PoaComponents {
    double direct = 0.0;
    double sky_diffuse = 0.0;
    double ground_reflected = 0.0;

    double total() const { return direct + sky_diffuse + ground_reflected; }
};

/// Isotropic-sky transposition.
inline PoaComponents transpose(const WeatherRecord& rec, double tilt_deg, double surface_azimuth_deg,
                               const SolarPosition& sun, double albedo) {
    const double cb = std::cos(geom::deg2rad(tilt_deg));
    PoaComponents poa;
    if (sun.elevation_deg > 0.0) {
        const double cos_aoi = std::cos(geom::deg2rad(angle_of_incidence(tilt_deg, surface_azimuth_deg, sun)));
        poa.direct = std::max(rec.dni * cos_aoi, 0.0);
    }
    poa.sky_diffuse = std::max(rec.dhi * (1.0 + cb) / 2.0, 0.0);
    poa.ground_reflected = std::max(rec.ghi * albedo * (1.0 - cb) / 2.0, 0.0);
    return poa;
}

/// Wind-adjusted NOCT cell temperature.
inline double cell_temperature(double poa_total, double temp_air, double wind_speed, double noct_degC) {
    return temp_air + (noct_degC - 20.0) / 800.0 * poa_total * 9.5 / (5.7 + 3.8 * wind_speed);
}

inline double pvwatts_dc(double poa_eff, double t_cell, double pdc0_w, double gamma_pdc) {
    return std::max(pdc0_w * (poa_eff / 1000.0) * (1.0 + gamma_pdc * (t_cell - 25.0)), 0.0);
}

inline double inverter_ac(double p_dc, const PvSystemConfig& cfg) {
    const double rated = cfg.pdc0_w / cfg.dc_ac_ratio * cfg.inv_eff_nom;
    return std::min(std::max(p_dc, 0.0) * cfg.inv_eff_nom, rated);
}

/// Haurwitz clear-sky GHI with a diffuse fraction that grows toward the horizon.
inline WeatherRecord clearsky(Timestamp t, double latitude_deg, double longitude_deg) {
    WeatherRecord r;
    r.timestamp = t;
    const SolarPosition sun = solar_position(t, latitude_deg, longitude_deg);
    const double cz = std::cos(geom::deg2rad(sun.zenith_deg));
    if (cz <= 0.0) return r;
    r.ghi = 1098.0 * cz * std::exp(-0.057 / cz);
    const double kd = 0.1 + 0.2 * (1.0 - cz);
    r.dhi = kd * r.ghi;
    r.dni = (r.ghi - r.dhi) / cz;
    return r;
}

inline constexpr std::chrono::minutes kHalfHour{30};

/// Hour-start stamps for a calendar year; irradiance evaluated at mid-hour.
inline WeatherSeries clearsky_year(int year, double latitude_deg, double longitude_deg) {
    using namespace std::chrono;
    WeatherSeries s;
    s.latitude_deg = latitude_deg;
    s.longitude_deg = longitude_deg;
    const Timestamp start = sys_days{std::chrono::year{year} / January / 1};
    const Timestamp end = sys_days{std::chrono::year{year + 1} / January / 1};
    for (Timestamp t = start; t < end; t += hours{1}) {
        WeatherRecord r = clearsky(t + kHalfHour, latitude_deg, longitude_deg);
        r.timestamp = t;
        s.records.push_back(r);
    }
    return s;
}

/// Throws unless the series is 8760 or 8784 consecutive hours.
inline void check_full_year(const WeatherSeries& w) {
    const std::size_t n = w.records.size();
    if (n != 8760 && n != 8784)
        throw ArgumentError("weather series must have 8760 or 8784 hourly records, got " + std::to_string(n));
    for (std::size_t i = 1; i < n; ++i)
        if (w.records[i].timestamp - w.records[i - 1].timestamp != std::chrono::hours{1})
            throw ArgumentError("weather series not hourly at " + format_timestamp(w.records[i].timestamp));
}

/// Sun positions at mid-hour for every record.
struct SolarTrack {
    std::vector<SolarPosition> positions;
};

inline SolarTrack solar_track(const WeatherSeries& w) {
    SolarTrack t;
    t.positions.reserve(w.records.size());
    for (const WeatherRecord& r : w.records)
        t.positions.push_back(solar_position(r.timestamp + kHalfHour, w.latitude_deg, w.longitude_deg));
    return t;
}

struct PvoutResult {
    double pvout_kwh_per_kwp = 0.0;
    double pvout_direct = 0.0;   // AC share attributed to the beam component
    double pvout_diffuse = 0.0;  // AC share attributed to sky diffuse plus ground reflection
    double poa_kwh_per_m2 = 0.0; // shaded plane-of-array insolation
};

inline PvoutResult pvout_annual(const WeatherSeries& weather, const SolarTrack& track, const HorizonMask& mask,
                                double tilt_deg, double surface_azimuth_deg, const PvSystemConfig& cfg) {
    check_full_year(weather);
    if (track.positions.size() != weather.records.size()) throw ArgumentError("solar track does not match series");
    const double svf = sky_view_factor(mask);
    PvoutResult out;
    double ac = 0.0, ac_direct = 0.0, ac_diffuse = 0.0, poa_sum = 0.0;
    for (std::size_t i = 0; i < weather.records.size(); ++i) {
        const WeatherRecord& rec = weather.records[i];
        const SolarPosition& sun = track.positions[i];
        PoaComponents poa = transpose(rec, tilt_deg, surface_azimuth_deg, sun, cfg.albedo);
        if (direct_blocked(mask, sun.azimuth_deg, sun.elevation_deg)) poa.direct = 0.0;
        poa.sky_diffuse *= svf;
        const double total = poa.total();
        if (total <= 0.0) continue;
        const double t_cell = cell_temperature(total, rec.temp_air, rec.wind_speed, cfg.noct_degC);
        const double p_dc = pvwatts_dc(total, t_cell, cfg.pdc0_w, cfg.gamma_pdc_per_degC) *
                            (1.0 - cfg.system_loss_fraction);
        const double p_ac = inverter_ac(p_dc, cfg);
        const double f_direct = poa.direct / total;
        ac += p_ac;
        ac_direct += p_ac * f_direct;
        ac_diffuse += p_ac * (1.0 - f_direct);
        poa_sum += total;
    }
    out.pvout_kwh_per_kwp = ac / cfg.pdc0_w;
    out.pvout_direct = ac_direct / cfg.pdc0_w;
    out.pvout_diffuse = ac_diffuse / cfg.pdc0_w;
    out.poa_kwh_per_m2 = poa_sum / 1000.0;
    return out;
}

inline PvoutResult pvout_annual(const WeatherSeries& weather, const HorizonMask& mask, double tilt_deg,
                                double surface_azimuth_deg, const PvSystemConfig& cfg) {
    check_full_year(weather);
    return pvout_annual(weather, solar_track(weather), mask, tilt_deg, surface_azimuth_deg, cfg);
}

}  // namespace solarpot::solar
