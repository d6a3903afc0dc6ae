// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risfocus/optimizer.hpp"
#include "risfocus/sweep.hpp"

#include <string>
#include <vector>

namespace risfocus {

// Radial semi-axis of the half-power focus region on the UE plane:
//   0.5 * [dh / tan(theta - beta/2) - dh / tan(theta + beta/2)],
// dh = h_ris - h_ue, theta = |theta_ue|. Throws GeometryError if either
// tangent argument leaves (0, 90) degrees.
double rho_radial(double h_ris, double h_ue, double theta_ue_deg, double beta_deg);

// Azimuth semi-axis |b| tan(alpha / 2).
double rho_azimuth(double range_b, double alpha_deg);

// Seconds between reconfigurations when moving `rho` meters at `speed`.
double update_interval(double rho, double speed);

struct FocusEllipse
{
    Vec3 center;
    double rho_a = 0.0;
    double rho_r = 0.0;
    Vec3 orientation; // horizontal unit vector, RIS -> center
    double alpha_deg = 0.0;
    double beta_deg = 0.0;

    // Membership of the horizontal offset from the center.
    bool contains(const Vec3 &p) const;
};

// Measures alpha and beta on the given configuration and converts them into
// the focus ellipse around `target`. The RIS center defines h_ris = 0.
FocusEllipse focus_ellipse(const Scenario &scenario, const RisConfig &config, const SphericalCoord &target);

// Piecewise-linear path traversed at constant speed.
struct Trajectory
{
    std::vector<Vec3> waypoints;
    double speed = 1.0;

    void validate() const;
    double length() const;
    double duration() const { return length() / speed; }
    Vec3 position_at(double t) const;
};

// Polyline approximating the constant-range arc between two coordinates
// with equal range and elevation.
Trajectory arc_trajectory(const SphericalCoord &from, const SphericalCoord &to, double speed, int segments = 64);

// Straight horizontal line from `start` along the RIS -> start direction.
Trajectory radial_trajectory(const SphericalCoord &start, double distance_m, double speed);

struct UpdateEvent
{
    double t_s = 0.0;
    Vec3 position;
    std::string config_hash;
    FocusEllipse ellipse;
};

struct UpdateSchedule
{
    std::vector<UpdateEvent> events;
    // Mean spacing between consecutive events; the trajectory duration if
    // one configuration covers the whole path.
    double mean_interval = 0.0;
};

inline constexpr double kPlannerStep = 1e-3; // seconds

// Event-driven walk: configure for the start point, then re-optimize (and
// re-measure the focus ellipse) the first sampled instant the UE leaves the
// current ellipse.
UpdateSchedule plan_updates(const Scenario &scenario, const Trajectory &trajectory, const ReflectionAlphabet &alphabet);

} // namespace risfocus
