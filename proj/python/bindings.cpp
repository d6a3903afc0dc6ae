// SPDX-License-Identifier: Apache-2.0
#include "risfocus/cli.hpp"
#include "risfocus/errors.hpp"
#include "risfocus/formats.hpp"
#include "risfocus/planner.hpp"
#include "risfocus/scenario_io.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace risfocus;

namespace {

py::array_t<double> grid_values(const PowerGrid &g)
{
    py::array_t<double> arr({g.spec.nx, g.spec.ny});
    auto view = arr.mutable_unchecked<2>();
    for (int i = 0; i < g.spec.nx; ++i)
        for (int j = 0; j < g.spec.ny; ++j)
            view(i, j) = g.at(i, j);
    return arr;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "RIS link-budget simulator, configuration optimizer and reconfiguration planner";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<GeometryError>(m, "GeometryError", PyExc_ArithmeticError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    m.attr("BELOW_FLOOR") = kBelowFloor;

    // geometry
    py::class_<Vec3>(m, "Vec3")
        .def(py::init<>())
        .def(py::init([](double x, double y, double z) { return Vec3{x, y, z}; }), py::arg("x"), py::arg("y"),
             py::arg("z"))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("norm", &Vec3::norm)
        .def("__iter__", [](const Vec3 &v) { return py::iter(py::make_tuple(v.x, v.y, v.z)); })
        .def("__repr__", [](const Vec3 &v) {
            std::ostringstream s;
            s << "Vec3(" << v.x << ", " << v.y << ", " << v.z << ")";
            return s.str();
        });

    py::class_<SphericalCoord>(m, "SphericalCoord")
        .def(py::init([](double r, double az, double el) { return SphericalCoord{r, az, el}; }), py::arg("r"),
             py::arg("azimuth_deg"), py::arg("elevation_deg"))
        .def_readwrite("r", &SphericalCoord::r)
        .def_readwrite("azimuth_deg", &SphericalCoord::azimuth_deg)
        .def_readwrite("elevation_deg", &SphericalCoord::elevation_deg);

    m.def("spherical_to_cartesian", &spherical_to_cartesian);
    m.def("cartesian_to_spherical", &cartesian_to_spherical);

    py::class_<RisLayout>(m, "RisLayout")
        .def_readonly("elements", &RisLayout::elements)
        .def_readonly("pitch", &RisLayout::pitch)
        .def_readonly("d_y", &RisLayout::d_y)
        .def_readonly("d_z", &RisLayout::d_z)
        .def_readonly("rings", &RisLayout::rings)
        .def("__len__", &RisLayout::size);
    m.def("hex_layout", &hex_layout, py::arg("rings"), py::arg("pitch"), py::arg("d_y"), py::arg("d_z"));

    // link budget
    py::class_<ReflectionCoefficient>(m, "ReflectionCoefficient")
        .def(py::init([](double mag, double phase) { return ReflectionCoefficient{mag, phase}; }),
             py::arg("magnitude"), py::arg("phase_deg"))
        .def_readwrite("magnitude", &ReflectionCoefficient::magnitude)
        .def_readwrite("phase_deg", &ReflectionCoefficient::phase_deg)
        .def("value", &ReflectionCoefficient::value)
        .def(py::self == py::self);

    py::class_<AntennaPattern>(m, "AntennaPattern")
        .def(py::init([](double g, double q) { return AntennaPattern{g, q}; }), py::arg("gain_dbi"),
             py::arg("exponent"))
        .def_readwrite("gain_dbi", &AntennaPattern::gain_dbi)
        .def_readwrite("exponent", &AntennaPattern::exponent)
        .def("value", &AntennaPattern::value);

    py::class_<Scenario>(m, "Scenario")
        .def_static("reference", &Scenario::reference)
        .def_readwrite("frequency_hz", &Scenario::frequency_hz)
        .def_readwrite("tx_power_dbm", &Scenario::tx_power_dbm)
        .def_readwrite("bs_position", &Scenario::bs_position)
        .def_readwrite("bs_pattern", &Scenario::bs_pattern)
        .def_readwrite("ue_pattern", &Scenario::ue_pattern)
        .def_readwrite("element_pattern", &Scenario::element_pattern)
        .def_readwrite("layout", &Scenario::layout);

    py::class_<RisConfig>(m, "RisConfig")
        .def_readonly("coefficients", &RisConfig::coefficients)
        .def_readonly("alphabet_name", &RisConfig::alphabet_name)
        .def("__len__", &RisConfig::size)
        .def("hash", &config_hash);

    m.def("wavelength", &wavelength);
    m.def("combined_pattern", &combined_pattern);
    m.def("element_phasor", &element_phasor);
    m.def("received_power", &received_power, py::arg("scenario"), py::arg("config"), py::arg("ue_position"));
    m.def("noise_floor", &noise_floor, py::arg("temperature_k"), py::arg("bandwidth_hz"), py::arg("averages"),
          py::arg("noise_figure_db"));

    // optimizer
    py::class_<ReflectionAlphabet>(m, "ReflectionAlphabet")
        .def_static("reflective", &ReflectionAlphabet::reflective)
        .def_static("active", &ReflectionAlphabet::active)
        .def_static("off_structural", &ReflectionAlphabet::off_structural,
                    py::arg("state") = ReflectionAlphabet::kDefaultOffState)
        .def_readonly("name", &ReflectionAlphabet::name)
        .def_readonly("states", &ReflectionAlphabet::states);

    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("config", &OptimizationResult::config)
        .def_readonly("states", &OptimizationResult::states)
        .def_readonly("objective", &OptimizationResult::objective)
        .def_readonly("pass_objectives", &OptimizationResult::pass_objectives)
        .def_readonly("passes", &OptimizationResult::passes)
        .def_readonly("converged", &OptimizationResult::converged);

    m.def("optimize_config", &optimize_config, py::arg("scenario"), py::arg("target"), py::arg("alphabet"));
    m.def("brute_force_config", &brute_force_config, py::arg("scenario"), py::arg("target"), py::arg("alphabet"));
    m.def("uniform_config", &uniform_config, py::arg("layout"), py::arg("state"), py::arg("alphabet_name") = "uniform");

    // sweep
    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_static("measurement_table", &GridSpec::measurement_table, py::arg("points_compat") = false)
        .def_readwrite("x0", &GridSpec::x0)
        .def_readwrite("y0", &GridSpec::y0)
        .def_readwrite("dx", &GridSpec::dx)
        .def_readwrite("dy", &GridSpec::dy)
        .def_readwrite("nx", &GridSpec::nx)
        .def_readwrite("ny", &GridSpec::ny)
        .def_readwrite("z_plane", &GridSpec::z_plane);

    py::class_<PowerGrid>(m, "PowerGrid")
        .def_readonly("spec", &PowerGrid::spec)
        .def_readwrite("label", &PowerGrid::label)
        .def_readonly("fingerprint", &PowerGrid::fingerprint)
        .def_property_readonly("values", &grid_values)
        .def("to_csv", [](const PowerGrid &g) {
            std::ostringstream s;
            write_power_grid_csv(s, g);
            return s.str();
        })
        .def("to_pgm", [](const PowerGrid &g, double lo, double hi) { return py::bytes(encode_pgm(g, lo, hi)); });

    py::class_<SounderParams>(m, "SounderParams")
        .def(py::init<>())
        .def_readwrite("averages", &SounderParams::averages)
        .def_readwrite("n1", &SounderParams::n1)
        .def_readwrite("n2", &SounderParams::n2)
        .def_readwrite("signal_tap", &SounderParams::signal_tap)
        .def_readwrite("noise_figure_db", &SounderParams::noise_figure_db)
        .def_readwrite("temperature_k", &SounderParams::temperature_k)
        .def_readwrite("bandwidth_hz", &SounderParams::bandwidth_hz)
        .def_readwrite("rng_seed", &SounderParams::rng_seed)
        .def_readwrite("noise_enabled", &SounderParams::noise_enabled)
        .def("floor_dbm", &SounderParams::floor_dbm);

    py::class_<Peak>(m, "Peak")
        .def_readonly("i", &Peak::i)
        .def_readonly("j", &Peak::j)
        .def_readonly("x", &Peak::x)
        .def_readonly("y", &Peak::y)
        .def_readonly("power_dbm", &Peak::power_dbm);

    py::enum_<BeamAxis>(m, "BeamAxis").value("azimuth", BeamAxis::azimuth).value("elevation", BeamAxis::elevation);

    py::class_<GridComparison>(m, "GridComparison")
        .def_readonly("peak_offset_m", &GridComparison::peak_offset_m)
        .def_readonly("peak_delta_db", &GridComparison::peak_delta_db)
        .def_readonly("rmse_db", &GridComparison::rmse_db)
        .def_readonly("threshold_dbm", &GridComparison::threshold_dbm)
        .def_readonly("cells_compared", &GridComparison::cells_compared);

    m.def("sweep_power", &sweep_power, py::arg("scenario"), py::arg("config"), py::arg("grid"), py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("emulate_measurement_grid", &emulate_measurement_grid, py::arg("scenario"), py::arg("config"),
          py::arg("grid"), py::arg("sounder"), py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("average_ir_power", &average_ir_power, py::arg("records"), py::arg("n1"), py::arg("n2"),
          py::arg("tx_power_dbm"));
    m.def("find_peak", &find_peak);
    m.def("hpbw", py::overload_cast<const Scenario &, const RisConfig &, const SphericalCoord &, BeamAxis>(&hpbw),
          py::arg("scenario"), py::arg("config"), py::arg("target"), py::arg("axis"));
    m.def("compare_grids", &compare_grids, py::arg("a"), py::arg("b"), py::arg("threshold_dbm") = -90.0);

    // planner
    py::class_<FocusEllipse>(m, "FocusEllipse")
        .def_readonly("center", &FocusEllipse::center)
        .def_readonly("rho_a", &FocusEllipse::rho_a)
        .def_readonly("rho_r", &FocusEllipse::rho_r)
        .def_readonly("orientation", &FocusEllipse::orientation)
        .def_readonly("alpha_deg", &FocusEllipse::alpha_deg)
        .def_readonly("beta_deg", &FocusEllipse::beta_deg)
        .def("contains", &FocusEllipse::contains);

    py::class_<Trajectory>(m, "Trajectory")
        .def(py::init([](std::vector<Vec3> w, double v) { return Trajectory{std::move(w), v}; }),
             py::arg("waypoints"), py::arg("speed"))
        .def_readonly("waypoints", &Trajectory::waypoints)
        .def_readonly("speed", &Trajectory::speed)
        .def("length", &Trajectory::length)
        .def("position_at", &Trajectory::position_at);

    py::class_<UpdateEvent>(m, "UpdateEvent")
        .def_readonly("t_s", &UpdateEvent::t_s)
        .def_readonly("position", &UpdateEvent::position)
        .def_readonly("config_hash", &UpdateEvent::config_hash)
        .def_readonly("ellipse", &UpdateEvent::ellipse);

    py::class_<UpdateSchedule>(m, "UpdateSchedule")
        .def_readonly("events", &UpdateSchedule::events)
        .def_readonly("mean_interval", &UpdateSchedule::mean_interval);

    m.def("rho_radial", &rho_radial, py::arg("h_ris"), py::arg("h_ue"), py::arg("theta_ue_deg"), py::arg("beta_deg"));
    m.def("rho_azimuth", &rho_azimuth, py::arg("range_b"), py::arg("alpha_deg"));
    m.def("update_interval", &update_interval, py::arg("rho"), py::arg("speed"));
    m.def("focus_ellipse", &focus_ellipse, py::arg("scenario"), py::arg("config"), py::arg("target"));
    m.def("arc_trajectory", &arc_trajectory, py::arg("start"), py::arg("end"), py::arg("speed"),
          py::arg("segments") = 64);
    m.def("radial_trajectory", &radial_trajectory, py::arg("start"), py::arg("distance_m"), py::arg("speed"));
    m.def("plan_updates", &plan_updates, py::arg("scenario"), py::arg("trajectory"), py::arg("alphabet"),
          py::call_guard<py::gil_scoped_release>());

    // scenario files and CLI
    py::class_<ScenarioSettings>(m, "ScenarioSettings")
        .def(py::init<>())
        .def("scenario", &ScenarioSettings::scenario)
        .def("grid_spec", &ScenarioSettings::grid_spec)
        .def("sounder_params", &ScenarioSettings::sounder_params)
        .def("target", &ScenarioSettings::target)
        .def("echo", &echo_scenario);
    m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("source") = "<input>");
    m.def("load_scenario", &load_scenario, py::arg("path"));

    m.def(
        "cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "risfocus");
            std::ostringstream out, err;
            const int code = cli_dispatch(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run one CLI invocation in-process; returns (exit_code, stdout, stderr).");
}
