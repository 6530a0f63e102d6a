#pragma once

// Geometric solar elevation and azimuth tabulated by ephemeris.py.

namespace oracle {

struct EphemerisRow {
    const char* site;
    double latitude_deg;
    double longitude_deg;
    const char* utc;
    double elevation_deg;
    double azimuth_deg;
};

inline constexpr EphemerisRow kEphemeris[] = {
    {"montpellier", 43.6, 3.87, "2003-03-20T00:00:00Z", -46.7786, 2.8236},
    {"montpellier", 43.6, 3.87, "2003-03-20T04:00:00Z", -20.1681, 70.0710},
    {"montpellier", 43.6, 3.87, "2003-03-20T08:00:00Z", 22.3272, 113.4795},
    {"montpellier", 43.6, 3.87, "2003-03-20T12:00:00Z", 46.1490, 182.8448},
    {"montpellier", 43.6, 3.87, "2003-03-20T16:00:00Z", 19.7764, 249.7428},
    {"montpellier", 43.6, 3.87, "2003-03-20T20:00:00Z", -22.6267, 293.2491},
    {"montpellier", 43.6, 3.87, "2012-06-21T00:00:00Z", -22.8920, 3.4146},
    {"montpellier", 43.6, 3.87, "2012-06-21T04:00:00Z", -1.3217, 55.1597},
    {"montpellier", 43.6, 3.87, "2012-06-21T08:00:00Z", 39.7999, 94.5079},
    {"montpellier", 43.6, 3.87, "2012-06-21T12:00:00Z", 69.6407, 189.0019},
    {"montpellier", 43.6, 3.87, "2012-06-21T16:00:00Z", 34.8775, 270.3221},
    {"montpellier", 43.6, 3.87, "2012-06-21T20:00:00Z", -5.2435, 309.7038},
    {"montpellier", 43.6, 3.87, "2021-09-23T00:00:00Z", -46.1741, 8.3296},
    {"montpellier", 43.6, 3.87, "2021-09-23T04:00:00Z", -17.3916, 72.8611},
    {"montpellier", 43.6, 3.87, "2021-09-23T08:00:00Z", 24.8957, 116.5800},
    {"montpellier", 43.6, 3.87, "2021-09-23T12:00:00Z", 45.8225, 188.3404},
    {"montpellier", 43.6, 3.87, "2021-09-23T16:00:00Z", 17.0133, 252.5503},
    {"montpellier", 43.6, 3.87, "2021-09-23T20:00:00Z", -25.3890, 296.1834},
    {"montpellier", 43.6, 3.87, "2029-12-21T00:00:00Z", -69.5142, 11.5547},
    {"montpellier", 43.6, 3.87, "2029-12-21T04:00:00Z", -34.1796, 90.9849},
    {"montpellier", 43.6, 3.87, "2029-12-21T08:00:00Z", 5.7685, 130.4080},
    {"montpellier", 43.6, 3.87, "2029-12-21T12:00:00Z", 22.8452, 184.3012},
    {"montpellier", 43.6, 3.87, "2029-12-21T16:00:00Z", 0.7926, 235.7739},
    {"montpellier", 43.6, 3.87, "2029-12-21T20:00:00Z", -40.4298, 275.1524},
    {"sydney", -33.87, 151.21, "2003-03-20T00:00:00Z", 45.8653, 47.2017},
    {"sydney", -33.87, 151.21, "2003-03-20T04:00:00Z", 46.6783, 314.5222},
    {"sydney", -33.87, 151.21, "2003-03-20T08:00:00Z", 0.7363, 270.1590},
    {"sydney", -33.87, 151.21, "2003-03-20T12:00:00Z", -45.3939, 226.6175},
    {"sydney", -33.87, 151.21, "2003-03-20T16:00:00Z", -46.2613, 134.9017},
    {"sydney", -33.87, 151.21, "2003-03-20T20:00:00Z", -0.5087, 90.4388},
    {"sydney", -33.87, 151.21, "2012-06-21T00:00:00Z", 26.3020, 29.9871},
    {"sydney", -33.87, 151.21, "2012-06-21T04:00:00Z", 25.6548, 328.6295},
    {"sydney", -33.87, 151.21, "2012-06-21T08:00:00Z", -13.3954, 289.4253},
    {"sydney", -33.87, 151.21, "2012-06-21T12:00:00Z", -62.4094, 255.5112},
    {"sydney", -33.87, 151.21, "2012-06-21T16:00:00Z", -61.2211, 103.1242},
    {"sydney", -33.87, 151.21, "2012-06-21T20:00:00Z", -12.2432, 69.8497},
    {"sydney", -33.87, 151.21, "2021-09-23T00:00:00Z", 47.8305, 42.3780},
    {"sydney", -33.87, 151.21, "2021-09-23T04:00:00Z", 44.1713, 310.3908},
    {"sydney", -33.87, 151.21, "2021-09-23T08:00:00Z", -2.4838, 268.0857},
    {"sydney", -33.87, 151.21, "2021-09-23T12:00:00Z", -47.5715, 222.0373},
    {"sydney", -33.87, 151.21, "2021-09-23T16:00:00Z", -43.7782, 130.7599},
    {"sydney", -33.87, 151.21, "2021-09-23T20:00:00Z", 2.8529, 88.5638},
    {"sydney", -33.87, 151.21, "2029-12-21T00:00:00Z", 63.1931, 74.5524},
    {"sydney", -33.87, 151.21, "2029-12-21T04:00:00Z", 60.4336, 282.2674},
    {"sydney", -33.87, 151.21, "2029-12-21T08:00:00Z", 11.4937, 249.3731},
    {"sydney", -33.87, 151.21, "2029-12-21T12:00:00Z", -26.6728, 209.1700},
    {"sydney", -33.87, 151.21, "2029-12-21T16:00:00Z", -25.2754, 147.8426},
    {"sydney", -33.87, 151.21, "2029-12-21T20:00:00Z", 14.0711, 108.9985},
};

}  // namespace oracle
