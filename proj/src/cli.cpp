// SPDX-License-Identifier: Apache-2.0
#include "risfocus/cli.hpp"
#include "risfocus/errors.hpp"
#include "risfocus/formats.hpp"
#include "risfocus/planner.hpp"
#include "risfocus/scenario_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace risfocus {

namespace {

struct GlobalOptions
{
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    bool points_compat = false;
    unsigned threads = 0;
    bool quiet = false;
};

// Where the RIS configuration of a command comes from.
struct ConfigSource
{
    std::string config_path;
    std::string target;
    std::string alphabet;
    std::string uniform;

    void attach(CLI::App *cmd)
    {
        cmd->add_option("--config", config_path, "RIS configuration file written by `optimize`");
        cmd->add_option("--target", target, "target name from the scenario or 'range_m,azimuth_deg,elevation_deg'");
        cmd->add_option("--alphabet", alphabet, "reflective | active | off_structural");
        cmd->add_option("--uniform", uniform, "uniform config: off | structural | MAG,PHASE_DEG");
    }
};

struct Context
{
    ScenarioSettings settings;
    Scenario scenario;
    std::ostream &out;
    std::ostream &err;
};

std::string fmt(const char *spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// Writes to --out when given, otherwise to the command's stdout.
void emit(const std::string &path, std::ostream &fallback, const std::function<void(std::ostream &)> &writer)
{
    if (path.empty())
    {
        writer(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ValidationError("cannot write '" + path + "'");
    writer(f);
    if (!f)
        throw ValidationError("failed writing '" + path + "'");
}

std::string file_alphabet(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read config file '" + path + "'");
    std::string line;
    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.rfind("# alphabet=", 0) == 0)
            return line.substr(11);
    }
    throw ValidationError("config file '" + path + "' has no '# alphabet=' line");
}

std::string default_target(const ScenarioSettings &s)
{
    if (s.targets.empty())
        throw ValidationError("scenario defines no targets; pass --target");
    return s.targets.front().name;
}

RisConfig resolve_config(const Context &ctx, const ConfigSource &src)
{
    const int chosen = !src.config_path.empty() + !src.uniform.empty();
    if (chosen > 1)
        throw ValidationError("--config and --uniform are mutually exclusive");

    if (!src.config_path.empty())
    {
        const auto alphabet = ctx.settings.alphabet_named(file_alphabet(src.config_path));
        return read_config_csv(src.config_path, alphabet, ctx.scenario.layout.size());
    }
    if (!src.uniform.empty())
    {
        if (src.uniform == "off")
            return uniform_config(ctx.scenario.layout, {0.0, 0.0}, "off");
        if (src.uniform == "structural")
            return uniform_config(ctx.scenario.layout, ctx.settings.off_state, "off_structural");
        const auto comma = src.uniform.find(',');
        if (comma == std::string::npos)
            throw ValidationError("--uniform expects off, structural or MAG,PHASE_DEG");
        try
        {
            const ReflectionCoefficient c{std::stod(src.uniform.substr(0, comma)),
                                          std::stod(src.uniform.substr(comma + 1))};
            if (!(c.magnitude >= 0.0))
                throw ValidationError("--uniform magnitude must be >= 0");
            return uniform_config(ctx.scenario.layout, c, "uniform");
        }
        catch (const std::logic_error &)
        {
            throw ValidationError("--uniform expects off, structural or MAG,PHASE_DEG");
        }
    }
    const std::string target = src.target.empty() ? default_target(ctx.settings) : src.target;
    const auto alphabet = src.alphabet.empty() ? ctx.settings.selected_alphabet() : ctx.settings.alphabet_named(src.alphabet);
    auto result = optimize_config(ctx.scenario, spherical_to_cartesian(ctx.settings.target(target)), alphabet);
    if (!result.converged)
        ctx.err << "warning: coordinate ascent did not converge\n";
    return result.config;
}

SphericalCoord resolve_target(const Context &ctx, const ConfigSource &src)
{
    return ctx.settings.target(src.target.empty() ? default_target(ctx.settings) : src.target);
}

void print_kv(std::ostream &out, const char *key, const std::string &value)
{
    out << key << '=' << value << '\n';
}

} // namespace

int cli_dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"risfocus: RIS link-budget simulator and reconfiguration planner", "risfocus"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--scenario", g.scenario_path, "scenario JSON file (defaults to the reference setup)");
    app.add_option("--seed", g.seed, "override the sounder RNG seed");
    app.add_flag("--points-compat", g.points_compat, "drop the last x-row of the grid (30 x 46 = 1380 points)");
    app.add_option("--threads", g.threads, "worker threads for grid sweeps (0 = hardware)");
    app.add_flag("--quiet", g.quiet, "do not echo the resolved scenario on stderr");

    std::function<void(Context &)> action;

    // scenario
    auto *cmd_scenario = app.add_subcommand("scenario", "print the fully resolved scenario document");
    cmd_scenario->callback([&] { action = [](Context &c) { c.out << echo_scenario(c.settings); }; });

    // layout
    std::optional<int> layout_rings;
    std::optional<double> layout_pitch;
    std::string layout_out;
    auto *cmd_layout = app.add_subcommand("layout", "element positions as CSV");
    cmd_layout->add_option("--rings", layout_rings, "hexagonal ring count");
    cmd_layout->add_option("--pitch-mm", layout_pitch, "element pitch in mm");
    cmd_layout->add_option("--out", layout_out, "output CSV (default stdout)");
    cmd_layout->callback([&] {
        action = [&](Context &c) {
            const int rings = layout_rings.value_or(c.settings.rings);
            const double pitch = layout_pitch.value_or(c.settings.pitch_mm);
            if (!(pitch > 0.0))
                throw ValidationError("--pitch-mm must be > 0");
            const auto layout =
                hex_layout(rings, pitch * 1e-3, c.settings.element_dy_mm * 1e-3, c.settings.element_dz_mm * 1e-3);
            emit(layout_out, c.out, [&](std::ostream &o) { write_layout_csv(o, layout); });
        };
    });

    // optimize
    std::string opt_target, opt_alphabet, opt_out;
    auto *cmd_opt = app.add_subcommand("optimize", "optimize a RIS configuration for a target");
    cmd_opt->add_option("--target", opt_target, "target name or 'range_m,azimuth_deg,elevation_deg'");
    cmd_opt->add_option("--alphabet", opt_alphabet, "reflective | active | off_structural");
    cmd_opt->add_option("--out", opt_out, "output config file (default stdout)");
    cmd_opt->callback([&] {
        action = [&](Context &c) {
            const auto target = c.settings.target(opt_target.empty() ? default_target(c.settings) : opt_target);
            const auto alphabet =
                opt_alphabet.empty() ? c.settings.selected_alphabet() : c.settings.alphabet_named(opt_alphabet);
            const Vec3 p = spherical_to_cartesian(target);
            const auto result = optimize_config(c.scenario, p, alphabet);
            if (!result.converged)
                c.err << "warning: coordinate ascent did not converge\n";
            emit(opt_out, c.out, [&](std::ostream &o) {
                write_config_csv(o, result.config, alphabet);
                o << "# target_power_dbm=" << format_g6(received_power(c.scenario, result.config, p)) << '\n';
                o << "# passes=" << result.passes << " converged=" << (result.converged ? "true" : "false") << '\n';
                if (alphabet.name == "active")
                {
                    // Amplitude ratio against the reflective magnitude, as
                    // power (squared inside the coherent sum) and as 10log10.
                    const double ratio = 1.25 / 0.3;
                    o << "# per_element_gain_vs_reflective_db=" << fmt("%.2f", 20.0 * std::log10(ratio))
                      << " amplitude_ratio=" << fmt("%.3f", ratio)
                      << " ratio_10log10_db=" << fmt("%.2f", 10.0 * std::log10(ratio)) << '\n';
                }
            });
        };
    });

    // sweep / emulate
    ConfigSource sweep_src;
    std::string sweep_out, sweep_heatmap, sweep_label;
    double heat_min = -110.0, heat_max = -50.0;
    bool no_noise = false;
    std::optional<int> emulate_q;
    auto add_grid_outputs = [&](CLI::App *cmd) {
        sweep_src.attach(cmd);
        cmd->add_option("--out", sweep_out, "power grid CSV (default stdout)");
        cmd->add_option("--heatmap", sweep_heatmap, "also write a PGM heatmap");
        cmd->add_option("--min-dbm", heat_min, "heatmap black level");
        cmd->add_option("--max-dbm", heat_max, "heatmap white level");
        cmd->add_option("--label", sweep_label, "grid label");
    };
    auto finish_grid = [&](Context &c, PowerGrid grid) {
        if (!sweep_label.empty())
            grid.label = sweep_label;
        emit(sweep_out, c.out, [&](std::ostream &o) { write_power_grid_csv(o, grid); });
        if (!sweep_heatmap.empty())
            export_heatmap(grid, heat_min, heat_max, sweep_heatmap);
    };

    auto *cmd_sweep = app.add_subcommand("sweep", "deterministic received-power grid");
    add_grid_outputs(cmd_sweep);
    cmd_sweep->callback([&] {
        action = [&](Context &c) {
            const auto config = resolve_config(c, sweep_src);
            finish_grid(c, sweep_power(c.scenario, config, c.settings.grid_spec(), g.threads));
        };
    });

    auto *cmd_emulate = app.add_subcommand("emulate", "emulated channel-sounder measurement grid");
    add_grid_outputs(cmd_emulate);
    cmd_emulate->add_flag("--no-noise", no_noise, "disable receiver noise");
    cmd_emulate->add_option("--q", emulate_q, "number of averaged records");
    cmd_emulate->callback([&] {
        action = [&](Context &c) {
            const auto config = resolve_config(c, sweep_src);
            SounderParams snd = c.settings.sounder_params();
            if (no_noise)
                snd.noise_enabled = false;
            if (emulate_q)
                snd.averages = *emulate_q;
            auto grid = emulate_measurement_grid(c.scenario, config, c.settings.grid_spec(), snd, g.threads);
            finish_grid(c, std::move(grid));
        };
    });

    // hpbw
    ConfigSource beam_src;
    std::string hpbw_axis = "both";
    auto *cmd_hpbw = app.add_subcommand("hpbw", "half-power beamwidth around a target");
    beam_src.attach(cmd_hpbw);
    cmd_hpbw->add_option("--axis", hpbw_axis, "azimuth | elevation | both")
        ->check(CLI::IsMember({"azimuth", "elevation", "both"}));
    cmd_hpbw->callback([&] {
        action = [&](Context &c) {
            const auto target = resolve_target(c, beam_src);
            const auto config = resolve_config(c, beam_src);
            if (hpbw_axis != "elevation")
                print_kv(c.out, "alpha_deg", fmt("%.4f", hpbw(c.scenario, config, target, BeamAxis::azimuth)));
            if (hpbw_axis != "azimuth")
                print_kv(c.out, "beta_deg", fmt("%.4f", hpbw(c.scenario, config, target, BeamAxis::elevation)));
        };
    });

    // ellipse
    auto *cmd_ellipse = app.add_subcommand("ellipse", "half-power focus ellipse on the UE plane");
    beam_src.attach(cmd_ellipse);
    cmd_ellipse->callback([&] {
        action = [&](Context &c) {
            const auto target = resolve_target(c, beam_src);
            const auto config = resolve_config(c, beam_src);
            const auto e = focus_ellipse(c.scenario, config, target);
            print_kv(c.out, "center_x_m", fmt("%.6f", e.center.x));
            print_kv(c.out, "center_y_m", fmt("%.6f", e.center.y));
            print_kv(c.out, "center_z_m", fmt("%.6f", e.center.z));
            print_kv(c.out, "alpha_deg", fmt("%.4f", e.alpha_deg));
            print_kv(c.out, "beta_deg", fmt("%.4f", e.beta_deg));
            print_kv(c.out, "rho_a_m", fmt("%.6f", e.rho_a));
            print_kv(c.out, "rho_r_m", fmt("%.6f", e.rho_r));
        };
    });

    // plan
    std::string plan_from, plan_to, plan_path = "arc", plan_out, plan_alphabet;
    double plan_speed = 1.0, plan_distance = 0.6;
    auto *cmd_plan = app.add_subcommand("plan", "reconfiguration schedule for a moving UE");
    cmd_plan->add_option("--from", plan_from, "start target")->required();
    cmd_plan->add_option("--to", plan_to, "end target (arc paths)");
    cmd_plan->add_option("--path", plan_path, "arc | radial")->check(CLI::IsMember({"arc", "radial"}));
    cmd_plan->add_option("--distance-m", plan_distance, "radial path length");
    cmd_plan->add_option("--speed", plan_speed, "UE speed in m/s");
    cmd_plan->add_option("--alphabet", plan_alphabet, "reflective | active | off_structural");
    cmd_plan->add_option("--out", plan_out, "schedule CSV (default stdout)");
    cmd_plan->callback([&] {
        action = [&](Context &c) {
            const auto from = c.settings.target(plan_from);
            Trajectory traj;
            if (plan_path == "arc")
            {
                if (plan_to.empty())
                    throw ValidationError("plan --path arc requires --to");
                traj = arc_trajectory(from, c.settings.target(plan_to), plan_speed);
            }
            else
                traj = radial_trajectory(from, plan_distance, plan_speed);
            const auto alphabet =
                plan_alphabet.empty() ? c.settings.selected_alphabet() : c.settings.alphabet_named(plan_alphabet);
            const auto schedule = plan_updates(c.scenario, traj, alphabet);
            emit(plan_out, c.out, [&](std::ostream &o) { write_schedule_csv(o, schedule); });
            if (!plan_out.empty())
            {
                print_kv(c.out, "events", std::to_string(schedule.events.size()));
                print_kv(c.out, "mean_interval_s", fmt("%.6f", schedule.mean_interval));
            }
        };
    });

    // compare
    std::string cmp_a, cmp_b;
    double cmp_threshold = -90.0;
    auto *cmd_cmp = app.add_subcommand("compare", "compare two power grid CSVs");
    cmd_cmp->add_option("a", cmp_a, "reference grid")->required();
    cmd_cmp->add_option("b", cmp_b, "grid under test")->required();
    cmd_cmp->add_option("--threshold-dbm", cmp_threshold, "ignore cells below this level");
    cmd_cmp->callback([&] {
        action = [&](Context &c) {
            const auto m = compare_grids(read_power_grid_csv(cmp_a), read_power_grid_csv(cmp_b), cmp_threshold);
            print_kv(c.out, "peak_offset_m", fmt("%.6f", m.peak_offset_m));
            print_kv(c.out, "peak_delta_db", fmt("%.6f", m.peak_delta_db));
            print_kv(c.out, "rmse_db", fmt("%.6f", m.rmse_db));
            print_kv(c.out, "threshold_dbm", fmt("%.6f", m.threshold_dbm));
            print_kv(c.out, "cells_compared", std::to_string(m.cells_compared));
        };
    });

    // noise-floor
    std::optional<double> nf_temp, nf_bw, nf_db;
    std::optional<int> nf_q;
    auto *cmd_nf = app.add_subcommand("noise-floor", "thermal noise floor of the averaged measurement");
    cmd_nf->add_option("--temp-k", nf_temp, "temperature in K");
    cmd_nf->add_option("--bw-mhz", nf_bw, "bandwidth in MHz");
    cmd_nf->add_option("--q", nf_q, "number of averaged records");
    cmd_nf->add_option("--nf-db", nf_db, "noise figure in dB");
    cmd_nf->callback([&] {
        action = [&](Context &c) {
            const auto &s = c.settings;
            const double v = noise_floor(nf_temp.value_or(s.sounder.temperature_k),
                                         nf_bw.value_or(s.bandwidth_mhz) * 1e6, nf_q.value_or(s.sounder.averages),
                                         nf_db.value_or(s.sounder.noise_figure_db));
            c.out << fmt("%.1f", v) << " dBm\n";
        };
    });

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty())
            reversed.pop_back(); // program name
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }
    catch (const ValidationError &e)
    {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try
    {
        ScenarioSettings settings = g.scenario_path.empty() ? ScenarioSettings{} : load_scenario(g.scenario_path);
        if (g.seed)
            settings.sounder.rng_seed = *g.seed;
        if (g.points_compat)
            settings.points_compat = true;
        settings.validate();
        Context ctx{settings, settings.scenario(), out, err};
        if (!g.quiet)
        {
            std::istringstream echo(echo_scenario(settings));
            for (std::string line; std::getline(echo, line);)
                err << "# " << line << '\n';
        }
        action(ctx);
    }
    catch (const ValidationError &e)
    {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    catch (const GeometryError &e)
    {
        err << "geometry error: " << e.what() << '\n';
        return kExitNumeric;
    }
    catch (const NumericError &e)
    {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}

} // namespace risfocus
