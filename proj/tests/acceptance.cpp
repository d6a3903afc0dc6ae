// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
#include "risfocus/cli.hpp"
#include "risfocus/formats.hpp"
#include "risfocus/optimizer.hpp"
#include "risfocus/planner.hpp"
#include "risfocus/sweep.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace risfocus;

namespace {

struct Outcome
{
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string &what)
    {
        if (!detail.empty())
            detail += "; ";
        detail += what + (ok ? "" : " [miss]");
        pass = pass && ok;
    }
};

std::string fmt(const char *spec, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, spec, a, b, c);
    return buf;
}

const SphericalCoord kP1s{1.4, 40.0, -16.0};
const SphericalCoord kP2s{1.4, 10.0, -16.0};

std::string cli(std::vector<std::string> args, int *code = nullptr)
{
    args.insert(args.begin(), {"risfocus", "--quiet"});
    std::ostringstream out, err;
    const int rc = cli_dispatch(args, out, err);
    if (code)
        *code = rc;
    return out.str();
}

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome noise_floor_criterion()
{
    Outcome o;
    int code = -1;
    const auto text = cli({"noise-floor", "--temp-k", "293", "--bw-mhz", "155", "--q", "50", "--nf-db", "9"}, &code);
    const double printed = std::stod(text);
    const double exact = noise_floor(293.0, 155e6, 50, 9.0);
    o.check(code == 0 && std::abs(printed + 100.0) <= 0.2, "cli prints " + text.substr(0, text.size() - 1));
    o.check(std::abs(exact + 100.0) <= 0.2, fmt("closed form %.4f dBm", exact));
    return o;
}

Outcome layout_criterion()
{
    Outcome o;
    const auto layout = hex_layout(6, 8.7e-3, 6.6e-3, 6.6e-3);
    double dmin = 1e9;
    for (std::size_t a = 0; a < layout.size(); ++a)
        for (std::size_t b = a + 1; b < layout.size(); ++b)
            dmin = std::min(dmin, distance(layout.elements[a], layout.elements[b]));
    o.check(layout.size() == 127, "M=" + std::to_string(layout.size()));
    o.check(std::abs(dmin - 8.7e-3) <= 1e-12, fmt("min distance %.15g m", dmin));
    return o;
}

struct Focus
{
    Peak peak;
    double offset_m;
};

Focus focus(const Scenario &s, const SphericalCoord &target, const ReflectionAlphabet &alphabet)
{
    const Vec3 p = spherical_to_cartesian(target);
    const auto cfg = optimize_config(s, p, alphabet).config;
    const auto peak = find_peak(sweep_power(s, cfg, GridSpec::measurement_table()));
    return {peak, std::hypot(peak.x - p.x, peak.y - p.y)};
}

Outcome reflective_criterion(const Focus &p1, const Focus &p2)
{
    Outcome o;
    o.check(std::abs(p1.peak.power_dbm + 57.0) <= 3.0, fmt("P1 peak %.2f dBm", p1.peak.power_dbm));
    o.check(p1.offset_m <= 0.02 + 1e-9, fmt("P1 peak-to-projection %.3f m", p1.offset_m));
    o.check(std::abs(p2.peak.power_dbm + 56.0) <= 3.0, fmt("P2 peak %.2f dBm", p2.peak.power_dbm));
    o.check(p2.offset_m <= 0.02 + 1e-9, fmt("P2 peak-to-projection %.3f m", p2.offset_m));
    return o;
}

Outcome active_criterion(const Focus &r1, const Focus &r2, const Focus &a1, const Focus &a2)
{
    Outcome o;
    o.check(std::abs(a1.peak.power_dbm + 52.0) <= 3.0, fmt("P1 peak %.2f dBm", a1.peak.power_dbm));
    o.check(std::abs(a2.peak.power_dbm + 52.0) <= 3.0, fmt("P2 peak %.2f dBm", a2.peak.power_dbm));
    for (const auto &[name, a, r] : {std::tuple{"P1", a1, r1}, std::tuple{"P2", a2, r2}})
    {
        const double gain = a.peak.power_dbm - r.peak.power_dbm;
        o.check(gain >= 4.0 && gain <= 8.0, std::string(name) + fmt(" gain %.2f dB", gain));
    }
    return o;
}

Outcome hpbw_criterion(const Scenario &s)
{
    Outcome o;
    const auto cfg = optimize_config(s, spherical_to_cartesian(kP2s), ReflectionAlphabet::active()).config;
    const double alpha = hpbw(s, cfg, kP2s, BeamAxis::azimuth);
    const double beta = hpbw(s, cfg, kP2s, BeamAxis::elevation);
    o.check(std::abs(alpha - 8.0) <= 2.0, fmt("alpha %.3f deg", alpha));
    o.check(std::abs(beta - 7.0) <= 2.0, fmt("beta %.3f deg", beta));
    return o;
}

Outcome ellipse_criterion()
{
    Outcome o;
    const double ra = rho_azimuth(1.4, 8.0);
    const double rr = rho_radial(0.0, -0.39, 16.0, 7.0);
    o.check(std::abs(ra - 0.098) <= 0.002, fmt("rho_a %.4f m", ra));
    o.check(std::abs(rr - 0.32892514552194498) <= 0.005 && std::abs(rr - 0.329) <= 0.005,
            fmt("rho_r %.4f m (published figure 0.40 m not targeted)", rr));
    return o;
}

Outcome interval_criterion(const Scenario &s)
{
    Outcome o;
    o.check(update_interval(0.09, 1.0) == 0.09, fmt("%.17g s", update_interval(0.09, 1.0)));
    o.check(update_interval(0.40, 1.0) == 0.40, fmt("%.17g s", update_interval(0.40, 1.0)));
    const auto sched = plan_updates(s, arc_trajectory(kP2s, kP1s, 1.0), ReflectionAlphabet::active());
    o.check(std::abs(sched.mean_interval - 0.090) <= 0.020,
            fmt("arc mean interval %.1f ms over %.0f events", sched.mean_interval * 1e3,
                static_cast<double>(sched.events.size())));
    return o;
}

Outcome optimizer_criterion()
{
    Outcome o;
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_real_distribution<double> mag(0.05, 1.0), ph(-std::numbers::pi, std::numbers::pi);
    for (const auto &alphabet : {ReflectionAlphabet::reflective(), ReflectionAlphabet::active()})
    {
        int close = 0, exceeded = 0, non_monotone = 0;
        for (int trial = 0; trial < 100; ++trial)
        {
            std::vector<std::complex<double>> g(static_cast<std::size_t>(size(rng)));
            for (auto &x : g)
                x = std::polar(mag(rng), ph(rng));
            const auto fast = coordinate_ascent(g, alphabet);
            const auto best = exhaustive_search(g, alphabet);
            if (fast.objective > best.objective * (1.0 + 1e-12))
                ++exceeded;
            if (10.0 * std::log10(best.objective / fast.objective) <= 0.5)
                ++close;
            for (std::size_t k = 1; k < fast.pass_objectives.size(); ++k)
                if (fast.pass_objectives[k] < fast.pass_objectives[k - 1])
                {
                    ++non_monotone;
                    break;
                }
        }
        o.check(close >= 95 && exceeded == 0 && non_monotone == 0,
                alphabet.name + fmt(" %.0f/100 within 0.5 dB, %.0f above brute force, %.0f non-monotone", close, exceeded,
                                    non_monotone));
    }
    return o;
}

Outcome emulation_criterion(const Scenario &s)
{
    Outcome o;
    const auto spec = GridSpec::measurement_table();
    const auto cfg = optimize_config(s, spherical_to_cartesian(kP1s), ReflectionAlphabet::reflective()).config;

    SounderParams quiet;
    quiet.noise_enabled = false;
    const auto sim = sweep_power(s, cfg, spec);
    const auto emu = emulate_measurement_grid(s, cfg, spec, quiet);
    double worst = 0.0;
    for (std::size_t k = 0; k < sim.values.size(); ++k)
        worst = std::max(worst, std::abs(sim.values[k] - emu.values[k]));
    o.check(worst <= 1e-9, fmt("noise-free max deviation %.2e dB", worst));

    const auto off = emulate_measurement_grid(s, uniform_config(s.layout, {0.0, 0.0}), spec, SounderParams{});
    double sum = 0.0;
    for (double v : off.values)
        sum += dbm_to_mw(v);
    const double mean = mw_to_dbm(sum / off.values.size());
    o.check(std::abs(mean + 100.0) <= 1.0, fmt("all-off mean %.2f dBm", mean));

    const auto structural =
        emulate_measurement_grid(s, uniform_config(s.layout, ReflectionAlphabet::kDefaultOffState), spec, SounderParams{});
    const auto peak = find_peak(structural);
    const double az = cartesian_to_spherical({peak.x, peak.y, spec.z_plane}).azimuth_deg;
    o.check(std::abs(peak.power_dbm + 80.0) <= 3.0 && std::abs(az - 36.0) <= 6.0,
            fmt("structural peak %.2f dBm at azimuth %.1f deg", peak.power_dbm, az));
    return o;
}

Outcome determinism_criterion(const Scenario &s)
{
    Outcome o;
    const auto dir = std::filesystem::path(RISFOCUS_TEST_TMP) / "acceptance";
    std::filesystem::create_directories(dir);
    const auto cfg = (dir / "cfg.csv").string();
    cli({"optimize", "--target", "P1", "--out", cfg});
    const auto grid_a = (dir / "a.csv").string();
    const auto grid_b = (dir / "b.csv").string();
    cli({"sweep", "--config", cfg, "--out", grid_a});
    cli({"--seed", "3", "emulate", "--config", cfg, "--out", grid_b});

    const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
        {"scenario", {"scenario"}},
        {"layout", {"layout"}},
        {"optimize", {"optimize", "--target", "P1", "--alphabet", "active"}},
        {"sweep", {"sweep", "--config", cfg, "--heatmap", "{pgm}"}},
        {"emulate", {"--seed", "3", "emulate", "--config", cfg, "--heatmap", "{pgm}"}},
        {"hpbw", {"hpbw", "--target", "P2", "--alphabet", "active"}},
        {"ellipse", {"ellipse", "--target", "P2", "--alphabet", "active"}},
        {"plan", {"plan", "--from", "P2", "--to", "P1", "--alphabet", "active"}},
        {"compare", {"compare", grid_a, grid_b}},
        {"noise-floor", {"noise-floor"}},
    };
    std::vector<std::string> differing;
    for (const auto &[name, cmd] : commands)
    {
        std::string outputs[2];
        for (int run = 0; run < 2; ++run)
        {
            auto args = cmd;
            const auto pgm = (dir / (name + std::to_string(run) + ".pgm")).string();
            for (auto &a : args)
                if (a == "{pgm}")
                    a = pgm;
            int code = -1;
            outputs[run] = cli(args, &code) + (std::filesystem::exists(pgm) ? slurp(pgm) : "");
            if (code != 0)
                outputs[run] = "exit " + std::to_string(code) + std::to_string(run);
        }
        if (outputs[0] != outputs[1] || outputs[0].empty())
            differing.push_back(name);
    }
    std::string list;
    for (const auto &d : differing)
        list += " " + d;
    o.check(differing.empty(), differing.empty() ? "10 subcommands byte-identical" : "differing:" + list);

    const auto ocfg = optimize_config(s, spherical_to_cartesian(kP2s), ReflectionAlphabet::active()).config;
    const auto spec = GridSpec::measurement_table();
    const bool sweep_same = sweep_power(s, ocfg, spec, 1).values == sweep_power(s, ocfg, spec, 8).values;
    const bool emu_same = emulate_measurement_grid(s, ocfg, spec, SounderParams{}, 1).values ==
                          emulate_measurement_grid(s, ocfg, spec, SounderParams{}, 8).values;
    o.check(sweep_same && emu_same, "serial and 8-thread grids bit-identical");
    return o;
}

} // namespace

int main()
{
    const Scenario s = Scenario::reference();
    const Focus r1 = focus(s, kP1s, ReflectionAlphabet::reflective());
    const Focus r2 = focus(s, kP2s, ReflectionAlphabet::reflective());
    const Focus a1 = focus(s, kP1s, ReflectionAlphabet::active());
    const Focus a2 = focus(s, kP2s, ReflectionAlphabet::active());

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"noise floor", noise_floor_criterion},
        {"layout", layout_criterion},
        {"reflective focusing", [&] { return reflective_criterion(r1, r2); }},
        {"active focusing", [&] { return active_criterion(r1, r2, a1, a2); }},
        {"hpbw", [&] { return hpbw_criterion(s); }},
        {"focus ellipse", ellipse_criterion},
        {"update intervals", [&] { return interval_criterion(s); }},
        {"optimizer vs brute force", optimizer_criterion},
        {"measurement emulation", [&] { return emulation_criterion(s); }},
        {"determinism", [&] { return determinism_criterion(s); }},
    };

    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k)
    {
        Outcome o;
        try
        {
            o = criteria[k].second();
        }
        catch (const std::exception &e)
        {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
