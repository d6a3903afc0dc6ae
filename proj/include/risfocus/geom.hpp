// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace risfocus {

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Cartesian position in meters. The RIS lies in the yz-plane with its
// surface normal along +x.
struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr bool operator==(const Vec3 &) const = default;

    constexpr double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline constexpr Vec3 operator*(double s, const Vec3 &v) { return v * s; }

inline double distance(const Vec3 &a, const Vec3 &b) { return (a - b).norm(); }

// Spherical position. Azimuth is measured in the xy-plane from +x toward +y,
// elevation from the xy-plane toward +z. Both in degrees.
struct SphericalCoord
{
    double r = 0.0;
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;

    // Throws ValidationError unless r >= 0, azimuth in (-180, 180] and
    // elevation in [-90, 90].
    void validate() const;
};

Vec3 spherical_to_cartesian(const SphericalCoord &s);

// Azimuth of a point on the z-axis (including the origin) is 0.
SphericalCoord cartesian_to_spherical(const Vec3 &v);

// Element centers of a planar RIS, all with x = 0.
struct RisLayout
{
    std::vector<Vec3> elements;
    double pitch = 0.0; // smallest center-to-center distance d
    double d_y = 0.0;   // effective element size along y
    double d_z = 0.0;   // effective element size along z
    int rings = 0;

    std::size_t size() const { return elements.size(); }
};

// Number of elements of a centered hexagonal layout: 3n(n+1) + 1.
constexpr std::size_t centered_hex_count(int rings)
{
    const auto n = static_cast<std::size_t>(rings);
    return 3 * n * (n + 1) + 1;
}

// Centered hexagonal lattice in the yz-plane. One nearest-neighbor axis is
// aligned with +y. Ordering: center first, then ring by ring outward, each
// ring counterclockwise (y toward z) starting on the +y axis.
RisLayout hex_layout(int rings, double pitch, double d_y, double d_z);

// Row-major rectangular grid centered on the origin; used by tests and for
// layouts that are not hexagonal.
RisLayout rect_layout(int ny, int nz, double pitch, double d_y, double d_z);

} // namespace risfocus
