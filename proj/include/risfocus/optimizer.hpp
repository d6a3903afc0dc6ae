// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risfocus/linkbudget.hpp"

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace risfocus {

// Finite set of reflection coefficients an element can realize.
struct ReflectionAlphabet
{
    std::string name;
    std::vector<ReflectionCoefficient> states;

    // {(0.3, -15 deg), (0.3, 165 deg)}
    static ReflectionAlphabet reflective();
    // {(1.25, 0 deg), (0, 0 deg)}
    static ReflectionAlphabet active();
    // Single fixed state emulating a powered-down RIS.
    static ReflectionAlphabet off_structural(ReflectionCoefficient state = kDefaultOffState);

    std::optional<std::size_t> index_of(const ReflectionCoefficient &c) const;

    // Throws ValidationError if empty or containing duplicate states.
    void validate() const;

    static constexpr ReflectionCoefficient kDefaultOffState{0.16, 0.0};
};

// Resolves "reflective", "active" or "off_structural".
ReflectionAlphabet alphabet_by_name(std::string_view name,
                                    ReflectionCoefficient off_state = ReflectionAlphabet::kDefaultOffState);

// Throws ValidationError if the config length differs from `elements` or
// any coefficient is not a member of the alphabet.
void validate_config(const RisConfig &config, const ReflectionAlphabet &alphabet, std::size_t elements);

RisConfig uniform_config(const RisLayout &layout, const ReflectionCoefficient &state, std::string alphabet_name = "uniform");

struct OptimizationResult
{
    RisConfig config;
    std::vector<std::size_t> states;      // alphabet index per element
    double objective = 0.0;               // |sum Gamma_m g_m|^2
    std::vector<double> pass_objectives;  // entry 0 is the initialization
    int passes = 0;
    bool converged = false;
};

// Coordinate ascent over per-element states.
//
// The primary start picks, for each element independently, the state that
// maximizes Re(Gamma * g_m), i.e. aligns every contribution to a zero-phase
// reference (ties go to the lower index). Each pass then visits the elements
// in layout order and moves an element to the state that maximizes the
// objective given all other elements; the current state is kept unless a
// strictly better one exists. A run stops after a pass with no change or
// after `max_passes` passes.
//
// Before the passes, an aligned start is re-aligned to the phase of its own
// sum until the states repeat. Starts are taken at reference phases
// 2 pi k / kReferencePhases (k = 0 is the zero-phase start above) and at
// every uniform config. The best final objective wins; among equal
// objectives the run that converged in the fewest passes, then the earliest
// start. `pass_objectives`, `passes`
// and `converged` describe the winning run.
inline constexpr int kReferencePhases = 16;
OptimizationResult coordinate_ascent(std::span<const std::complex<double>> phasors, const ReflectionAlphabet &alphabet,
                                     int max_passes = 10);

// Exhaustive search; ties resolve to the lexicographically smallest state
// vector. Throws ValidationError when |alphabet|^M exceeds 2^20.
OptimizationResult exhaustive_search(std::span<const std::complex<double>> phasors, const ReflectionAlphabet &alphabet);

OptimizationResult optimize_config(const Scenario &scenario, const Vec3 &target, const ReflectionAlphabet &alphabet);
OptimizationResult brute_force_config(const Scenario &scenario, const Vec3 &target, const ReflectionAlphabet &alphabet);

} // namespace risfocus
