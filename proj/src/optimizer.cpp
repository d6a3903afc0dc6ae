// SPDX-License-Identifier: Apache-2.0
#include "risfocus/optimizer.hpp"
#include "risfocus/errors.hpp"

#include <cmath>
#include <numbers>

namespace risfocus {

namespace {

// Relative margin a candidate must beat the current state by. Guards the
// ascent against flip-flopping on rounding noise.
constexpr double kImprovementMargin = 1e-12;

constexpr int kAlignIterations = 32;

RisConfig config_from_states(const ReflectionAlphabet &alphabet, std::span<const std::size_t> states)
{
    RisConfig config;
    config.alphabet_name = alphabet.name;
    config.coefficients.reserve(states.size());
    for (std::size_t s : states)
        config.coefficients.push_back(alphabet.states[s]);
    return config;
}

double objective_of(std::span<const std::complex<double>> phasors, std::span<const std::complex<double>> values,
                    std::span<const std::size_t> states)
{
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t m = 0; m < phasors.size(); ++m)
        sum += values[states[m]] * phasors[m];
    return std::norm(sum);
}

std::vector<std::complex<double>> state_values(const ReflectionAlphabet &alphabet)
{
    std::vector<std::complex<double>> values;
    for (const auto &s : alphabet.states)
        values.push_back(s.value());
    return values;
}

} // namespace

ReflectionAlphabet ReflectionAlphabet::reflective()
{
    return {"reflective", {{0.3, -15.0}, {0.3, 165.0}}};
}

ReflectionAlphabet ReflectionAlphabet::active()
{
    return {"active", {{1.25, 0.0}, {0.0, 0.0}}};
}

ReflectionAlphabet ReflectionAlphabet::off_structural(ReflectionCoefficient state)
{
    return {"off_structural", {state}};
}

std::optional<std::size_t> ReflectionAlphabet::index_of(const ReflectionCoefficient &c) const
{
    for (std::size_t k = 0; k < states.size(); ++k)
        if (states[k] == c)
            return k;
    return std::nullopt;
}

void ReflectionAlphabet::validate() const
{
    if (states.empty())
        throw ValidationError("alphabet '" + name + "' has no states");
    for (std::size_t i = 0; i < states.size(); ++i)
    {
        if (!(states[i].magnitude >= 0.0) || !std::isfinite(states[i].magnitude))
            throw ValidationError("alphabet '" + name + "': magnitudes must be finite and >= 0");
        for (std::size_t j = i + 1; j < states.size(); ++j)
            if (states[i] == states[j])
                throw ValidationError("alphabet '" + name + "' has duplicate states");
    }
}

ReflectionAlphabet alphabet_by_name(std::string_view name, ReflectionCoefficient off_state)
{
    if (name == "reflective")
        return ReflectionAlphabet::reflective();
    if (name == "active")
        return ReflectionAlphabet::active();
    if (name == "off_structural" || name == "off")
        return ReflectionAlphabet::off_structural(off_state);
    throw ValidationError("unknown alphabet '" + std::string(name) + "' (expected reflective, active or off_structural)");
}

void validate_config(const RisConfig &config, const ReflectionAlphabet &alphabet, std::size_t elements)
{
    if (config.size() != elements)
        throw ValidationError("config has " + std::to_string(config.size()) + " coefficients, layout has " +
                              std::to_string(elements));
    for (std::size_t m = 0; m < config.size(); ++m)
        if (!alphabet.index_of(config.coefficients[m]))
            throw ValidationError("config coefficient " + std::to_string(m) + " is not in alphabet '" +
                                  alphabet.name + "'");
}

RisConfig uniform_config(const RisLayout &layout, const ReflectionCoefficient &state, std::string alphabet_name)
{
    return {std::vector<ReflectionCoefficient>(layout.size(), state), std::move(alphabet_name)};
}

namespace {

struct AscentRun
{
    std::vector<std::size_t> states;
    std::vector<double> pass_objectives;
    int passes = 0;
    bool converged = false;
};

// Coordinate ascent from a given start; visits elements in layout order.
AscentRun ascend(std::span<const std::complex<double>> phasors, std::span<const std::complex<double>> values,
                 std::vector<std::size_t> states, int max_passes)
{
    AscentRun run;
    run.pass_objectives.push_back(objective_of(phasors, values, states));

    std::complex<double> total{0.0, 0.0};
    for (std::size_t m = 0; m < phasors.size(); ++m)
        total += values[states[m]] * phasors[m];

    for (int pass = 0; pass < max_passes; ++pass)
    {
        bool changed = false;
        for (std::size_t m = 0; m < phasors.size(); ++m)
        {
            const std::size_t current = states[m];
            const std::complex<double> rest = total - values[current] * phasors[m];
            std::size_t best = current;
            double best_value = std::norm(rest + values[current] * phasors[m]);
            for (std::size_t k = 0; k < values.size(); ++k)
            {
                const double v = std::norm(rest + values[k] * phasors[m]);
                if (v > best_value * (1.0 + kImprovementMargin) && v > best_value)
                {
                    best = k;
                    best_value = v;
                }
            }
            if (best != current)
            {
                states[m] = best;
                total = rest + values[best] * phasors[m];
                changed = true;
            }
        }
        ++run.passes;
        run.pass_objectives.push_back(objective_of(phasors, values, states));
        if (!changed)
        {
            run.converged = true;
            break;
        }
    }
    run.states = std::move(states);
    return run;
}

// Per-element state maximizing Re(Gamma g_m e^{-j phi}); ties keep the lower index.
std::vector<std::size_t> aligned_start(std::span<const std::complex<double>> phasors,
                                       std::span<const std::complex<double>> values, double phi)
{
    const std::complex<double> rot = std::polar(1.0, -phi);
    std::vector<std::size_t> states(phasors.size(), 0);
    for (std::size_t m = 0; m < phasors.size(); ++m)
    {
        double best = (values[0] * phasors[m] * rot).real();
        for (std::size_t k = 1; k < values.size(); ++k)
        {
            const double v = (values[k] * phasors[m] * rot).real();
            if (v > best)
            {
                best = v;
                states[m] = k;
            }
        }
    }
    return states;
}

} // namespace

OptimizationResult coordinate_ascent(std::span<const std::complex<double>> phasors, const ReflectionAlphabet &alphabet,
                                     int max_passes)
{
    alphabet.validate();
    const auto values = state_values(alphabet);

    std::vector<std::vector<std::size_t>> starts;
    for (int k = 0; k < kReferencePhases; ++k)
    {
        // Re-align to the phase of the resulting sum until the states repeat.
        auto states = aligned_start(phasors, values, 2.0 * std::numbers::pi * k / kReferencePhases);
        for (int iter = 0; iter < kAlignIterations; ++iter)
        {
            std::complex<double> total{0.0, 0.0};
            for (std::size_t m = 0; m < phasors.size(); ++m)
                total += values[states[m]] * phasors[m];
            if (total == std::complex<double>{0.0, 0.0})
                break;
            auto next = aligned_start(phasors, values, std::arg(total));
            if (next == states)
                break;
            states = std::move(next);
        }
        starts.push_back(std::move(states));
    }
    for (std::size_t s = 0; s < values.size(); ++s)
        starts.emplace_back(phasors.size(), s);

    AscentRun best;
    double best_objective = -1.0;
    for (auto &start : starts)
    {
        auto run = ascend(phasors, values, std::move(start), max_passes);
        const double objective = run.pass_objectives.back();
        const bool better = objective > best_objective * (1.0 + kImprovementMargin) && objective > best_objective;
        const bool tie = !better && objective >= best_objective * (1.0 - kImprovementMargin);
        const bool quicker = run.converged && (!best.converged || run.passes < best.passes);
        if (better || (tie && quicker))
        {
            best_objective = objective;
            best = std::move(run);
        }
    }

    OptimizationResult result;
    result.states = std::move(best.states);
    result.pass_objectives = std::move(best.pass_objectives);
    result.passes = best.passes;
    result.converged = best.converged;
    result.objective = result.pass_objectives.back();
    result.config = config_from_states(alphabet, result.states);
    return result;
}

OptimizationResult exhaustive_search(std::span<const std::complex<double>> phasors, const ReflectionAlphabet &alphabet)
{
    alphabet.validate();
    const auto values = state_values(alphabet);
    const std::size_t count = phasors.size();
    const double space = std::pow(static_cast<double>(values.size()), static_cast<double>(count));
    if (space > static_cast<double>(1u << 20))
        throw ValidationError("exhaustive search space " + std::to_string(values.size()) + "^" + std::to_string(count) +
                              " exceeds 2^20");

    // Odometer over state vectors with element 0 most significant, so the
    // first maximum found is the lexicographically smallest.
    std::vector<std::size_t> states(count, 0);
    OptimizationResult result;
    result.states = states;
    result.objective = objective_of(phasors, values, states);
    while (true)
    {
        std::size_t pos = count;
        while (pos > 0)
        {
            --pos;
            if (++states[pos] < values.size())
                break;
            states[pos] = 0;
            if (pos == 0)
            {
                pos = count; // wrapped around
                break;
            }
        }
        if (pos == count)
            break;
        const double v = objective_of(phasors, values, states);
        if (v > result.objective)
        {
            result.objective = v;
            result.states = states;
        }
    }
    result.converged = true;
    result.pass_objectives = {result.objective};
    result.config = config_from_states(alphabet, result.states);
    return result;
}

OptimizationResult optimize_config(const Scenario &scenario, const Vec3 &target, const ReflectionAlphabet &alphabet)
{
    const auto phasors = element_phasors(scenario, target);
    return coordinate_ascent(phasors, alphabet);
}

OptimizationResult brute_force_config(const Scenario &scenario, const Vec3 &target, const ReflectionAlphabet &alphabet)
{
    const auto phasors = element_phasors(scenario, target);
    return exhaustive_search(phasors, alphabet);
}

} // namespace risfocus
