#pragma once

// Horizon masks: per-sector obstruction elevation angles and the quantities
// derived from them.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "solarpot/error.hpp"
#include "solarpot/geom.hpp"

namespace solarpot {

inline constexpr int kDefaultSectors = 72;

/// Sector i covers compass azimuths [i * 360/n, (i + 1) * 360/n).
struct HorizonMask {
    std::vector<double> gamma_deg;

    HorizonMask() : gamma_deg(kDefaultSectors, 0.0) {}
    explicit HorizonMask(int n_sectors, double gamma = 0.0) {
        if (n_sectors < 1) throw ArgumentError("HorizonMask: n_sectors must be >= 1");
        gamma_deg.assign(static_cast<std::size_t>(n_sectors), gamma);
    }

    int n_sectors() const { return static_cast<int>(gamma_deg.size()); }
    double sector_width_deg() const { return 360.0 / static_cast<double>(gamma_deg.size()); }
    double sector_start_deg(int i) const { return i * sector_width_deg(); }
    double sector_center_deg(int i) const { return (i + 0.5) * sector_width_deg(); }

    int sector_of(double azimuth_deg) const {
        const int n = n_sectors();
        const int i = static_cast<int>(std::floor(geom::wrap_angle(azimuth_deg) / sector_width_deg()));
        return std::min(i, n - 1);
    }

    bool operator==(const HorizonMask&) const = default;
};

inline void validate(const HorizonMask& m) {
    if (m.gamma_deg.empty()) throw ArgumentError("horizon mask has no sectors");
    for (double g : m.gamma_deg)
        if (!(g >= 0.0 && g <= 90.0)) throw RangeError("horizon mask gamma outside [0, 90]");
}

/// Isotropic sky-view factor: mean of cos^2(gamma) over sectors.
inline double sky_view_factor(const HorizonMask& mask) {
    double acc = 0.0;
    for (double g : mask.gamma_deg) {
        const double c = std::cos(geom::deg2rad(g));
        acc += c * c;
    }
    return std::clamp(acc / static_cast<double>(mask.gamma_deg.size()), 0.0, 1.0);
}

inline bool direct_blocked(const HorizonMask& mask, double sun_azimuth_deg, double sun_elevation_deg) {
    if (sun_elevation_deg <= 0.0) return true;
    return sun_elevation_deg < mask.gamma_deg[static_cast<std::size_t>(mask.sector_of(sun_azimuth_deg))];
}

inline HorizonMask combine_masks(std::span<const HorizonMask> masks) {
    if (masks.empty()) throw ArgumentError("combine_masks: no masks");
    HorizonMask out = masks.front();
    for (const HorizonMask& m : masks.subspan(1)) {
        if (m.n_sectors() != out.n_sectors()) throw ArgumentError("combine_masks: sector counts differ");
        for (std::size_t i = 0; i < out.gamma_deg.size(); ++i)
            out.gamma_deg[i] = std::max(out.gamma_deg[i], m.gamma_deg[i]);
    }
    return out;
}

inline HorizonMask combine_masks(const HorizonMask& a, const HorizonMask& b) {
    const HorizonMask both[2] = {a, b};
    return combine_masks(std::span<const HorizonMask>(both));
}

inline void write_mask_csv(const HorizonMask& m, std::ostream& os) {
    os << "sector_start_deg,gamma_deg\n";
    char buf[64];
    for (int i = 0; i < m.n_sectors(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g,%.17g\n", m.sector_start_deg(i), m.gamma_deg[static_cast<std::size_t>(i)]);
        os << buf;
    }
}

inline HorizonMask read_mask_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("sector_start_deg,gamma_deg", 0) != 0)
        throw FormatError("mask CSV: expected header sector_start_deg,gamma_deg");
    std::vector<double> gammas;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw FormatError("mask CSV: malformed row '" + line + "'");
        try {
            gammas.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw FormatError("mask CSV: malformed row '" + line + "'");
        }
    }
    if (gammas.empty()) throw FormatError("mask CSV: no sectors");
    HorizonMask m(static_cast<int>(gammas.size()));
    m.gamma_deg = std::move(gammas);
    validate(m);
    return m;
}

}  // namespace solarpot
