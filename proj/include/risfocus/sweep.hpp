// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risfocus/linkbudget.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace risfocus {

// Rectangular sampling grid on a horizontal plane z = z_plane.
struct GridSpec
{
    double x0 = 0.92;
    double y0 = 0.02;
    double dx = 0.02;
    double dy = 0.02;
    int nx = 31;
    int ny = 46;
    double z_plane = -0.39;

    // xy-table area 0.92 <= x <= 1.52 m, 0.02 <= y <= 0.92 m in 2 cm steps
    // (31 x 46 points). `points_compat` drops the last x-row, giving 30 x 46
    // = 1380 points.
    static GridSpec measurement_table(bool points_compat = false);

    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    double x(int i) const { return x0 + i * dx; }
    double y(int j) const { return y0 + j * dy; }
    Vec3 point(int i, int j) const { return {x(i), y(j), z_plane}; }
    void validate() const;

    bool operator==(const GridSpec &) const = default;
};

// Received power in dBm per cell, stored x-major: values[i * ny + j].
struct PowerGrid
{
    GridSpec spec;
    std::vector<double> values;
    std::string label;
    std::string fingerprint;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * spec.ny + j]; }
    double &at(int i, int j) { return values[static_cast<std::size_t>(i) * spec.ny + j]; }
};

// Evaluates received_power at every cell. Cells are independent; `threads`
// = 0 uses the hardware concurrency, 1 runs serially. Results do not depend
// on the thread count.
PowerGrid sweep_power(const Scenario &scenario, const RisConfig &config, const GridSpec &grid, unsigned threads = 0);

struct SounderParams
{
    int averages = 50;   // Q
    int n1 = 7;          // first tap of the power window
    int n2 = 13;         // last tap, inclusive
    int signal_tap = 10; // where the deterministic path is placed
    double noise_figure_db = 9.0;
    double temperature_k = 293.0;
    double bandwidth_hz = 155e6;
    std::uint64_t rng_seed = 1;
    bool noise_enabled = true;

    void validate() const;
    double floor_dbm() const;
};

using ImpulseResponse = std::vector<std::complex<double>>;

// (P_BS / Q) |sum_{n=n1..n2} sum_q h_q[n]|^2 in dBm. Tap n is element n of
// each record.
double average_ir_power(std::span<const ImpulseResponse> records, int n1, int n2, double tx_power_dbm);

// Per-tap complex noise variance that makes the averaging pipeline on
// noise-only records reproduce the sounder's noise floor in expectation.
double tap_noise_variance(const SounderParams &sounder, double tx_power_dbm);

// Q synthetic records for one cell: a real deterministic tap at
// sounder.signal_tap sized so the averaging pipeline returns `received_mw`,
// plus independent complex Gaussian noise on every tap when enabled.
std::vector<ImpulseResponse> synthesize_records(double received_mw, const SounderParams &sounder, double tx_power_dbm,
                                                std::uint64_t cell_seed);

std::uint64_t cell_seed(std::uint64_t rng_seed, int i, int j);

PowerGrid emulate_measurement_grid(const Scenario &scenario, const RisConfig &config, const GridSpec &grid,
                                   const SounderParams &sounder, unsigned threads = 0);

struct Peak
{
    int i = 0;
    int j = 0;
    double x = 0.0;
    double y = 0.0;
    double power_dbm = kBelowFloor;
};

// Maximum cell; ties resolve to the smallest (i, j). Throws NumericError
// ("no peak") if every cell is below floor.
Peak find_peak(const PowerGrid &grid);

enum class BeamAxis
{
    azimuth,
    elevation
};

struct BeamCut
{
    std::vector<double> offsets_deg;
    std::vector<double> power_dbm;
};

// Received power along an arc of constant range through `target`, sampled at
// `step_deg` up to +-limit_deg.
BeamCut beam_cut(const Scenario &scenario, const RisConfig &config, const SphericalCoord &target, BeamAxis axis,
                 double step_deg = 0.1, double limit_deg = 45.0);

// Width between the -3 dB crossings (relative to the target power) on either
// side of the target, linearly interpolated. NumericError("beam not
// resolved") if either side has no crossing within the cut.
double hpbw(const BeamCut &cut);
double hpbw(const Scenario &scenario, const RisConfig &config, const SphericalCoord &target, BeamAxis axis);

struct GridComparison
{
    double peak_offset_m = 0.0;
    double peak_delta_db = 0.0; // peak(b) - peak(a)
    double rmse_db = 0.0;       // over cells where both grids are >= threshold
    double threshold_dbm = -90.0;
    std::size_t cells_compared = 0;
};

GridComparison compare_grids(const PowerGrid &a, const PowerGrid &b, double threshold_dbm = -90.0);

} // namespace risfocus
