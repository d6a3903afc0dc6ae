// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risfocus/geom.hpp"

#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace risfocus {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kBoltzmann = 1.380649e-23;   // J/K

// Received powers whose linear value falls below this level are reported as
// the "below floor" sentinel, -infinity.
inline constexpr double kFloorDbm = -250.0;
inline constexpr double kBelowFloor = -std::numeric_limits<double>::infinity();

inline bool is_below_floor(double dbm) { return dbm == kBelowFloor; }

// Converts milliwatts to dBm, mapping anything under kFloorDbm to kBelowFloor.
double mw_to_dbm(double mw);
double dbm_to_mw(double dbm);
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Complex reflection coefficient of one RIS element. A magnitude of zero
// means the element is switched off; its phase is then stored as 0.
struct ReflectionCoefficient
{
    double magnitude = 0.0;
    double phase_deg = 0.0;

    std::complex<double> value() const { return std::polar(magnitude, deg2rad(phase_deg)); }
    bool operator==(const ReflectionCoefficient &) const = default;
};

// Normalized cos^q power pattern. value() is 1 on boresight and lies in
// [0, 1] everywhere; negative cosines clamp to 0 unless q == 0.
struct AntennaPattern
{
    double gain_dbi = 0.0;
    double exponent = 0.0;

    double value(double cos_off_boresight) const;

    // cos^q pattern whose directivity 2(q + 1) matches the given gain.
    static AntennaPattern from_gain(double gain_dbi);
};

struct Scenario
{
    double frequency_hz = 23.8e9;
    double tx_power_dbm = 10.0;
    Vec3 bs_position;
    AntennaPattern bs_pattern;
    AntennaPattern ue_pattern;
    AntennaPattern element_pattern;
    RisLayout layout;
    Vec3 ue_boresight{0.0, 0.0, 1.0};

    // Reference measurement setup: 127-element hexagonal RIS, 8.7 mm pitch,
    // 6.6 mm elements, 23.8 GHz, 10 dBm, horn at (1.86 m, -36 deg, 0 deg).
    static Scenario reference();

    void validate() const;
};

struct RisConfig
{
    std::vector<ReflectionCoefficient> coefficients;
    std::string alphabet_name;

    std::size_t size() const { return coefficients.size(); }
};

double wavelength(const Scenario &scenario);

// Product of the four normalized pattern factors for element m: BS horn
// toward the element, element toward the BS, element toward the UE, UE
// toward the element. The two element factors are zero behind the RIS.
double combined_pattern(const Scenario &scenario, std::size_t m, const Vec3 &ue_position);

// sqrt(pattern) * exp(-j 2 pi (d_in + d_out) / lambda) / (d_in * d_out).
std::complex<double> path_phasor(double d_in, double d_out, double pattern, double wavelength);

// Summand of the coherent link budget for element m with the reflection
// coefficient factored out. Throws GeometryError on zero distances.
std::complex<double> element_phasor(const Scenario &scenario, std::size_t m, const Vec3 &ue_position);

// element_phasor for every element, in layout order.
std::vector<std::complex<double>> element_phasors(const Scenario &scenario, const Vec3 &ue_position);

// P_BS * G_BS * G_UE * (d_y d_z)^2 / (16 pi^2), in milliwatts.
double link_prefactor_mw(const Scenario &scenario);

// |sum_m Gamma_m g_m|^2.
double coherent_objective(std::span<const std::complex<double>> phasors, const RisConfig &config);

double received_power_mw(const Scenario &scenario, const RisConfig &config, const Vec3 &ue_position);

// Received power in dBm, or kBelowFloor.
double received_power(const Scenario &scenario, const RisConfig &config, const Vec3 &ue_position);

// 10 log10(k T B / (1 mW * Q)) + N_F.
double noise_floor(double temperature_k, double bandwidth_hz, int averages, double noise_figure_db);

// Stable 64-bit FNV-1a digests, rendered as 16 hex digits.
std::string fingerprint(const Scenario &scenario);
std::string config_hash(const RisConfig &config);

} // namespace risfocus
