// SPDX-License-Identifier: Apache-2.0
#include "risfocus/linkbudget.hpp"
#include "risfocus/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <numbers>

namespace risfocus {

double mw_to_dbm(double mw)
{
    if (!(mw > 0.0))
        return kBelowFloor;
    const double dbm = 10.0 * std::log10(mw);
    return dbm < kFloorDbm ? kBelowFloor : dbm;
}

double dbm_to_mw(double dbm)
{
    if (is_below_floor(dbm))
        return 0.0;
    return std::pow(10.0, dbm / 10.0);
}

double AntennaPattern::value(double cos_off_boresight) const
{
    if (exponent == 0.0)
        return 1.0;
    if (cos_off_boresight <= 0.0)
        return 0.0;
    return std::pow(std::min(cos_off_boresight, 1.0), exponent);
}

AntennaPattern AntennaPattern::from_gain(double gain_dbi)
{
    return {gain_dbi, db_to_linear(gain_dbi) / 2.0 - 1.0};
}

Scenario Scenario::reference()
{
    Scenario s;
    s.frequency_hz = 23.8e9;
    s.tx_power_dbm = 10.0;
    s.bs_position = spherical_to_cartesian({1.86, -36.0, 0.0});
    s.bs_pattern = AntennaPattern::from_gain(19.0);
    s.ue_pattern = {3.2, 0.0};
    s.element_pattern = {0.0, 1.0};
    s.layout = hex_layout(6, 8.7e-3, 6.6e-3, 6.6e-3);
    return s;
}

void Scenario::validate() const
{
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
        throw ValidationError("scenario: frequency must be > 0");
    if (!std::isfinite(tx_power_dbm))
        throw ValidationError("scenario: transmit power must be finite");
    if (!bs_position.finite())
        throw ValidationError("scenario: BS position must be finite");
    if (std::abs(bs_position.x) == 0.0)
        throw ValidationError("scenario: BS must not lie in the RIS plane (x = 0)");
    for (const auto *p : {&bs_pattern, &ue_pattern, &element_pattern})
        if (!(p->exponent >= 0.0) || !std::isfinite(p->exponent))
            throw ValidationError("scenario: pattern exponents must be finite and >= 0");
    if (layout.elements.empty())
        throw ValidationError("scenario: RIS layout is empty");
    if (!(layout.d_y > 0.0) || !(layout.d_z > 0.0))
        throw ValidationError("scenario: element dimensions must be > 0");
}

double wavelength(const Scenario &scenario)
{
    return kSpeedOfLight / scenario.frequency_hz;
}

namespace {

struct ElementGeometry
{
    Vec3 to_bs; // element -> BS
    Vec3 to_ue; // element -> UE
    double d_bs;
    double d_ue;
};

ElementGeometry element_geometry(const Scenario &scenario, std::size_t m, const Vec3 &ue_position)
{
    const Vec3 &u = scenario.layout.elements.at(m);
    ElementGeometry g{scenario.bs_position - u, ue_position - u, 0.0, 0.0};
    g.d_bs = g.to_bs.norm();
    g.d_ue = g.to_ue.norm();
    if (!(g.d_bs > 0.0))
        throw GeometryError("degenerate geometry: BS coincides with element " + std::to_string(m));
    if (!(g.d_ue > 0.0))
        throw GeometryError("degenerate geometry: UE coincides with element " + std::to_string(m));
    return g;
}

double pattern_product(const Scenario &scenario, const ElementGeometry &g)
{
    // RIS normal is +x; the two element factors have no back lobe.
    const double cos_rx = g.to_bs.x / g.d_bs;
    const double cos_tx = g.to_ue.x / g.d_ue;
    if (cos_rx <= 0.0 || cos_tx <= 0.0)
        return 0.0;

    const double bs_range = scenario.bs_position.norm();
    const Vec3 bs_boresight = scenario.bs_position * (-1.0 / bs_range);
    const double cos_bs = -g.to_bs.dot(bs_boresight) / g.d_bs;
    const double cos_ue = -g.to_ue.dot(scenario.ue_boresight) / g.d_ue;

    return scenario.bs_pattern.value(cos_bs) * scenario.element_pattern.value(cos_rx) *
           scenario.element_pattern.value(cos_tx) * scenario.ue_pattern.value(cos_ue);
}

} // namespace

double combined_pattern(const Scenario &scenario, std::size_t m, const Vec3 &ue_position)
{
    return pattern_product(scenario, element_geometry(scenario, m, ue_position));
}

std::complex<double> path_phasor(double d_in, double d_out, double pattern, double wavelength)
{
    const double phase = -2.0 * std::numbers::pi * (d_in + d_out) / wavelength;
    return std::polar(std::sqrt(pattern) / (d_in * d_out), phase);
}

std::complex<double> element_phasor(const Scenario &scenario, std::size_t m, const Vec3 &ue_position)
{
    const ElementGeometry g = element_geometry(scenario, m, ue_position);
    return path_phasor(g.d_bs, g.d_ue, pattern_product(scenario, g), wavelength(scenario));
}

std::vector<std::complex<double>> element_phasors(const Scenario &scenario, const Vec3 &ue_position)
{
    std::vector<std::complex<double>> out;
    out.reserve(scenario.layout.size());
    for (std::size_t m = 0; m < scenario.layout.size(); ++m)
        out.push_back(element_phasor(scenario, m, ue_position));
    return out;
}

double link_prefactor_mw(const Scenario &scenario)
{
    const double area = scenario.layout.d_y * scenario.layout.d_z;
    return dbm_to_mw(scenario.tx_power_dbm) * db_to_linear(scenario.bs_pattern.gain_dbi) *
           db_to_linear(scenario.ue_pattern.gain_dbi) * area * area /
           (16.0 * std::numbers::pi * std::numbers::pi);
}

double coherent_objective(std::span<const std::complex<double>> phasors, const RisConfig &config)
{
    if (phasors.size() != config.size())
        throw ValidationError("config length " + std::to_string(config.size()) + " does not match " +
                              std::to_string(phasors.size()) + " elements");
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t m = 0; m < phasors.size(); ++m)
        sum += config.coefficients[m].value() * phasors[m];
    return std::norm(sum);
}

double received_power_mw(const Scenario &scenario, const RisConfig &config, const Vec3 &ue_position)
{
    if (config.size() != scenario.layout.size())
        throw ValidationError("config length " + std::to_string(config.size()) + " does not match layout size " +
                              std::to_string(scenario.layout.size()));
    return link_prefactor_mw(scenario) * coherent_objective(element_phasors(scenario, ue_position), config);
}

double received_power(const Scenario &scenario, const RisConfig &config, const Vec3 &ue_position)
{
    return mw_to_dbm(received_power_mw(scenario, config, ue_position));
}

double noise_floor(double temperature_k, double bandwidth_hz, int averages, double noise_figure_db)
{
    if (!(temperature_k > 0.0) || !(bandwidth_hz > 0.0) || averages < 1)
        throw ValidationError("noise_floor: temperature, bandwidth and averages must be positive");
    const double watts = kBoltzmann * temperature_k * bandwidth_hz;
    return 10.0 * std::log10(watts / (1e-3 * static_cast<double>(averages))) + noise_figure_db;
}

namespace {

class Fnv1a
{
public:
    void add(double v)
    {
        if (v == 0.0)
            v = 0.0; // fold -0 into +0
        add(std::bit_cast<std::uint64_t>(v));
    }
    void add(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i)
        {
            hash_ ^= (v >> (8 * i)) & 0xffu;
            hash_ *= 0x100000001b3ull;
        }
    }
    void add(const std::string &s)
    {
        for (unsigned char c : s)
        {
            hash_ ^= c;
            hash_ *= 0x100000001b3ull;
        }
    }
    std::string hex() const
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
        return buf;
    }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

} // namespace

std::string fingerprint(const Scenario &scenario)
{
    Fnv1a h;
    h.add(scenario.frequency_hz);
    h.add(scenario.tx_power_dbm);
    for (const Vec3 &v : {scenario.bs_position, scenario.ue_boresight})
    {
        h.add(v.x);
        h.add(v.y);
        h.add(v.z);
    }
    for (const auto *p : {&scenario.bs_pattern, &scenario.ue_pattern, &scenario.element_pattern})
    {
        h.add(p->gain_dbi);
        h.add(p->exponent);
    }
    h.add(scenario.layout.d_y);
    h.add(scenario.layout.d_z);
    h.add(static_cast<std::uint64_t>(scenario.layout.size()));
    for (const Vec3 &u : scenario.layout.elements)
    {
        h.add(u.y);
        h.add(u.z);
    }
    return h.hex();
}

std::string config_hash(const RisConfig &config)
{
    Fnv1a h;
    h.add(config.alphabet_name);
    h.add(static_cast<std::uint64_t>(config.size()));
    for (const auto &c : config.coefficients)
    {
        h.add(c.magnitude);
        h.add(c.phase_deg);
    }
    return h.hex();
}

} // namespace risfocus
