// SPDX-License-Identifier: Apache-2.0
#include "risfocus/planner.hpp"
#include "risfocus/errors.hpp"

#include <cmath>

namespace risfocus {

double rho_radial(double h_ris, double h_ue, double theta_ue_deg, double beta_deg)
{
    if (!(h_ris > h_ue))
        throw ValidationError("rho_radial: RIS must be mounted above the UE plane");
    if (!(beta_deg > 0.0))
        throw ValidationError("rho_radial: beta must be > 0");
    const double theta = std::abs(theta_ue_deg);
    const double lower = theta - beta_deg / 2.0;
    const double upper = theta + beta_deg / 2.0;
    if (!(lower > 0.0 && upper < 90.0))
        throw GeometryError("rho_radial: tangent arguments must lie in (0, 90) degrees");
    const double dh = h_ris - h_ue;
    return 0.5 * (dh / std::tan(deg2rad(lower)) - dh / std::tan(deg2rad(upper)));
}

double rho_azimuth(double range_b, double alpha_deg)
{
    if (!(range_b > 0.0))
        throw ValidationError("rho_azimuth: range must be > 0");
    if (!(alpha_deg > 0.0 && alpha_deg < 180.0))
        throw ValidationError("rho_azimuth: alpha must lie in (0, 180) degrees");
    return range_b * std::tan(deg2rad(alpha_deg / 2.0));
}

double update_interval(double rho, double speed)
{
    if (!(speed > 0.0))
        throw ValidationError("update_interval: speed must be > 0");
    return rho / speed;
}

bool FocusEllipse::contains(const Vec3 &p) const
{
    const Vec3 d{p.x - center.x, p.y - center.y, 0.0};
    const double radial = d.dot(orientation);
    const double lateral = -d.x * orientation.y + d.y * orientation.x;
    const double u = radial / rho_r;
    const double v = lateral / rho_a;
    return u * u + v * v <= 1.0;
}

FocusEllipse focus_ellipse(const Scenario &scenario, const RisConfig &config, const SphericalCoord &target)
{
    target.validate();
    FocusEllipse e;
    e.center = spherical_to_cartesian(target);
    const double horizontal = std::hypot(e.center.x, e.center.y);
    if (!(horizontal > 0.0))
        throw GeometryError("focus_ellipse: target lies on the RIS vertical axis");
    e.orientation = {e.center.x / horizontal, e.center.y / horizontal, 0.0};
    e.alpha_deg = hpbw(scenario, config, target, BeamAxis::azimuth);
    e.beta_deg = hpbw(scenario, config, target, BeamAxis::elevation);
    e.rho_a = rho_azimuth(target.r, e.alpha_deg);
    e.rho_r = rho_radial(0.0, e.center.z, target.elevation_deg, e.beta_deg);
    return e;
}

void Trajectory::validate() const
{
    if (waypoints.size() < 2)
        throw ValidationError("trajectory: at least two waypoints are required");
    if (!(speed > 0.0) || !std::isfinite(speed))
        throw ValidationError("trajectory: speed must be > 0");
    for (const auto &w : waypoints)
        if (!w.finite())
            throw ValidationError("trajectory: waypoints must be finite");
}

double Trajectory::length() const
{
    double total = 0.0;
    for (std::size_t k = 1; k < waypoints.size(); ++k)
        total += distance(waypoints[k - 1], waypoints[k]);
    return total;
}

Vec3 Trajectory::position_at(double t) const
{
    double remaining = std::max(0.0, t) * speed;
    for (std::size_t k = 1; k < waypoints.size(); ++k)
    {
        const Vec3 seg = waypoints[k] - waypoints[k - 1];
        const double len = seg.norm();
        if (remaining <= len && len > 0.0)
            return waypoints[k - 1] + seg * (remaining / len);
        remaining -= len;
    }
    return waypoints.back();
}

Trajectory arc_trajectory(const SphericalCoord &from, const SphericalCoord &to, double speed, int segments)
{
    if (segments < 1)
        throw ValidationError("arc_trajectory: segments must be >= 1");
    if (from.r != to.r || from.elevation_deg != to.elevation_deg)
        throw ValidationError("arc_trajectory: endpoints must share range and elevation");
    Trajectory traj;
    traj.speed = speed;
    for (int k = 0; k <= segments; ++k)
    {
        SphericalCoord s = from;
        s.azimuth_deg = from.azimuth_deg + (to.azimuth_deg - from.azimuth_deg) * k / segments;
        traj.waypoints.push_back(spherical_to_cartesian(s));
    }
    return traj;
}

Trajectory radial_trajectory(const SphericalCoord &start, double distance_m, double speed)
{
    const Vec3 p = spherical_to_cartesian(start);
    const double horizontal = std::hypot(p.x, p.y);
    if (!(horizontal > 0.0))
        throw GeometryError("radial_trajectory: start lies on the RIS vertical axis");
    const Vec3 dir{p.x / horizontal, p.y / horizontal, 0.0};
    return {{p, p + dir * distance_m}, speed};
}

UpdateSchedule plan_updates(const Scenario &scenario, const Trajectory &trajectory, const ReflectionAlphabet &alphabet)
{
    trajectory.validate();

    auto configure = [&](double t, const Vec3 &p) {
        const auto opt = optimize_config(scenario, p, alphabet);
        UpdateEvent ev;
        ev.t_s = t;
        ev.position = p;
        ev.config_hash = config_hash(opt.config);
        ev.ellipse = focus_ellipse(scenario, opt.config, cartesian_to_spherical(p));
        return ev;
    };

    UpdateSchedule schedule;
    schedule.events.push_back(configure(0.0, trajectory.position_at(0.0)));

    const double duration = trajectory.duration();
    const auto steps = static_cast<long long>(std::floor(duration / kPlannerStep));
    for (long long k = 1; k <= steps + 1; ++k)
    {
        const double t = k <= steps ? static_cast<double>(k) * kPlannerStep : duration;
        if (t <= schedule.events.back().t_s)
            continue;
        const Vec3 p = trajectory.position_at(t);
        if (!schedule.events.back().ellipse.contains(p))
            schedule.events.push_back(configure(t, p));
    }

    if (schedule.events.size() >= 2)
        schedule.mean_interval = (schedule.events.back().t_s - schedule.events.front().t_s) /
                                 static_cast<double>(schedule.events.size() - 1);
    else
        schedule.mean_interval = duration;
    return schedule;
}

} // namespace risfocus
