// SPDX-License-Identifier: Apache-2.0
#include "risfocus/geom.hpp"
#include "risfocus/errors.hpp"

#include <array>
#include <string>

namespace risfocus {

void SphericalCoord::validate() const
{
    if (!std::isfinite(r) || r < 0.0)
        throw ValidationError("spherical coordinate: range must be finite and >= 0, got " + std::to_string(r));
    if (!(azimuth_deg > -180.0 && azimuth_deg <= 180.0))
        throw ValidationError("spherical coordinate: azimuth must be in (-180, 180], got " + std::to_string(azimuth_deg));
    if (!(elevation_deg >= -90.0 && elevation_deg <= 90.0))
        throw ValidationError("spherical coordinate: elevation must be in [-90, 90], got " + std::to_string(elevation_deg));
}

Vec3 spherical_to_cartesian(const SphericalCoord &s)
{
    const double az = deg2rad(s.azimuth_deg);
    const double el = deg2rad(s.elevation_deg);
    const double horizontal = s.r * std::cos(el);
    return {horizontal * std::cos(az), horizontal * std::sin(az), s.r * std::sin(el)};
}

SphericalCoord cartesian_to_spherical(const Vec3 &v)
{
    SphericalCoord s;
    s.r = v.norm();
    const double horizontal = std::hypot(v.x, v.y);
    if (horizontal == 0.0)
        s.azimuth_deg = 0.0;
    else
    {
        s.azimuth_deg = rad2deg(std::atan2(v.y, v.x));
        if (s.azimuth_deg <= -180.0)
            s.azimuth_deg = 180.0;
    }
    s.elevation_deg = s.r == 0.0 ? 0.0 : rad2deg(std::atan2(v.z, horizontal));
    return s;
}

namespace {

// Axial lattice coordinates (a, b) map to y = pitch * (a + b/2),
// z = pitch * b * sqrt(3)/2.
struct Axial
{
    int a;
    int b;
};

constexpr std::array<Axial, 6> kHexDirections{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

Vec3 axial_to_plane(const Axial &h, double pitch)
{
    const double y = pitch * (static_cast<double>(h.a) + 0.5 * static_cast<double>(h.b));
    const double z = pitch * static_cast<double>(h.b) * (std::numbers::sqrt3 / 2.0);
    return {0.0, y, z};
}

} // namespace

RisLayout hex_layout(int rings, double pitch, double d_y, double d_z)
{
    if (rings < 0)
        throw ValidationError("hex_layout: rings must be >= 0");
    if (!(pitch > 0.0) || !std::isfinite(pitch))
        throw ValidationError("hex_layout: pitch must be > 0");
    if (!(d_y > 0.0) || !(d_z > 0.0))
        throw ValidationError("hex_layout: element dimensions must be > 0");

    RisLayout layout;
    layout.pitch = pitch;
    layout.d_y = d_y;
    layout.d_z = d_z;
    layout.rings = rings;
    layout.elements.reserve(centered_hex_count(rings));
    layout.elements.push_back({0.0, 0.0, 0.0});

    for (int ring = 1; ring <= rings; ++ring)
    {
        // Start on the +y axis; walking along direction k+2 from corner k
        // traces the ring counterclockwise.
        Axial pos{ring, 0};
        for (std::size_t side = 0; side < 6; ++side)
        {
            const Axial step = kHexDirections[(side + 2) % 6];
            for (int s = 0; s < ring; ++s)
            {
                layout.elements.push_back(axial_to_plane(pos, pitch));
                pos.a += step.a;
                pos.b += step.b;
            }
        }
    }
    return layout;
}

RisLayout rect_layout(int ny, int nz, double pitch, double d_y, double d_z)
{
    if (ny < 1 || nz < 1)
        throw ValidationError("rect_layout: grid dimensions must be >= 1");
    if (!(pitch > 0.0))
        throw ValidationError("rect_layout: pitch must be > 0");

    RisLayout layout;
    layout.pitch = pitch;
    layout.d_y = d_y;
    layout.d_z = d_z;
    layout.rings = 0;
    const double y_off = 0.5 * static_cast<double>(ny - 1);
    const double z_off = 0.5 * static_cast<double>(nz - 1);
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            layout.elements.push_back({0.0, pitch * (iy - y_off), pitch * (iz - z_off)});
    return layout;
}

} // namespace risfocus
