// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risfocus/linkbudget.hpp"
#include "risfocus/optimizer.hpp"
#include "risfocus/sweep.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace risfocus {

struct NamedTarget
{
    std::string name;
    SphericalCoord position;
};

// User-facing scenario description. Units are part of the key names in the
// JSON document (frequency_ghz, pitch_mm, ...); defaults reproduce the
// reference measurement setup.
struct ScenarioSettings
{
    double frequency_ghz = 23.8;
    double tx_power_dbm = 10.0;

    SphericalCoord bs{1.86, -36.0, 0.0};
    double bs_gain_dbi = 19.0;
    std::optional<double> bs_pattern_q; // derived from the gain when unset

    double ue_gain_dbi = 3.2;
    double ue_pattern_q = 0.0;

    int rings = 6;
    double pitch_mm = 8.7;
    double element_dy_mm = 6.6;
    double element_dz_mm = 6.6;
    double element_pattern_q = 1.0;
    ReflectionCoefficient off_state = ReflectionAlphabet::kDefaultOffState;

    GridSpec grid;
    bool points_compat = false;

    // bandwidth_hz here is ignored; the document carries bandwidth_mhz.
    SounderParams sounder;
    double bandwidth_mhz = 155.0;

    std::string alphabet = "reflective";
    std::vector<NamedTarget> targets{{"P1", {1.4, 40.0, -16.0}}, {"P2", {1.4, 10.0, -16.0}}};

    Scenario scenario() const;
    GridSpec grid_spec() const; // applies points_compat
    SounderParams sounder_params() const;
    ReflectionAlphabet selected_alphabet() const;
    ReflectionAlphabet alphabet_named(std::string_view name) const;

    // Looks a target up by name; also accepts "r,az,el" literals.
    SphericalCoord target(std::string_view name_or_literal) const;

    void validate() const;
};

// Parses a JSON scenario document. Empty input yields the defaults. Unknown
// keys and invalid values throw ValidationError naming the key; syntax errors
// carry line and column.
ScenarioSettings parse_scenario(std::string_view text, std::string_view source = "<input>");
ScenarioSettings load_scenario(const std::filesystem::path &path);

// Fully resolved document, every key present; parse_scenario(echo(s))
// echoes identically.
std::string echo_scenario(const ScenarioSettings &settings);

} // namespace risfocus
