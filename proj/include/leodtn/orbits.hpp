#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace leodtn {

constexpr double kEarthRadiusKm = 6378.137;
constexpr double kMuEarth = 398600.4418;       // km^3/s^2
constexpr double kSpeedOfLightKmS = 299792.458;
constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

inline double deg2rad(double d) { return d * kPi / 180.0; }

inline double normalize_deg(double d) {
    d = std::fmod(d, 360.0);
    if (d < 0.0) d += 360.0;
    return d;
}

/// Circular orbit, eccentricity fixed at zero; angles in degrees.
struct OrbitalElements {
    double semi_major_axis_km = 0.0;
    double inclination_deg = 0.0;
    double raan_deg = 0.0;
    double arg_latitude_epoch_deg = 0.0;

    double mean_motion() const {  // rad/s
        double a = semi_major_axis_km;
        return std::sqrt(kMuEarth / (a * a * a));
    }
    double period() const { return 2.0 * kPi / mean_motion(); }
};

struct ConstellationSpec {
    int num_planes = 3;
    int sats_per_plane = 8;
    double altitude_km = 710.0;
    double inclination_deg = 98.5;
    int phasing_factor = 1;

    int total_sats() const { return num_planes * sats_per_plane; }
};

/// Evenly phased Walker-Delta constellation. Node k = plane * sats_per_plane + slot.
inline std::vector<OrbitalElements> build_walker_delta(const ConstellationSpec& spec) {
    if (spec.num_planes < 1 || spec.sats_per_plane < 1)
        throw std::invalid_argument("build_walker_delta: planes and sats per plane must be >= 1");
    if (spec.altitude_km <= 0.0)
        throw std::invalid_argument("build_walker_delta: altitude must be positive");

    const double a = kEarthRadiusKm + spec.altitude_km;
    const double raan_spacing = 360.0 / spec.num_planes;
    const double slot_spacing = 360.0 / spec.sats_per_plane;
    const double phase_offset = spec.phasing_factor * 360.0 / (spec.num_planes * spec.sats_per_plane);

    std::vector<OrbitalElements> out;
    out.reserve(spec.total_sats());
    for (int p = 0; p < spec.num_planes; ++p) {
        for (int s = 0; s < spec.sats_per_plane; ++s) {
            OrbitalElements e;
            e.semi_major_axis_km = a;
            e.inclination_deg = spec.inclination_deg;
            e.raan_deg = normalize_deg(p * raan_spacing);
            e.arg_latitude_epoch_deg = normalize_deg(s * slot_spacing + p * phase_offset);
            out.push_back(e);
        }
    }
    return out;
}

/// ECI position of a circular two-body orbit at time t (seconds past epoch).
inline Vec3 propagate(const OrbitalElements& e, double t) {
    const double u = deg2rad(e.arg_latitude_epoch_deg) + e.mean_motion() * t;
    const double raan = deg2rad(e.raan_deg);
    const double inc = deg2rad(e.inclination_deg);
    const double a = e.semi_major_axis_km;

    const double cu = std::cos(u), su = std::sin(u);
    const double co = std::cos(raan), so = std::sin(raan);
    const double ci = std::cos(inc), si = std::sin(inc);

    return {a * (cu * co - su * ci * so),
            a * (cu * so + su * ci * co),
            a * (su * si)};
}

/// True iff the segment p1-p2 stays everywhere at least
/// (Earth radius + grazing altitude) away from the Earth's center.
inline bool line_of_sight(const Vec3& p1, const Vec3& p2, double grazing_altitude_km) {
    const double limit = kEarthRadiusKm + grazing_altitude_km;
    const Vec3 d = p2 - p1;
    const double dd = d.dot(d);
    double min_dist;
    if (dd == 0.0) {
        min_dist = p1.norm();
    } else {
        double t = -p1.dot(d) / dd;
        if (t < 0.0) t = 0.0;
        if (t > 1.0) t = 1.0;
        min_dist = (p1 + d * t).norm();
    }
    return min_dist >= limit;
}

}  // namespace leodtn
