// SPDX-License-Identifier: Apache-2.0
#include "risfocus/errors.hpp"
#include "risfocus/linkbudget.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace risfocus;

namespace {

Scenario isotropic_single_element(const Vec3 &bs)
{
    Scenario s = Scenario::reference();
    s.layout = hex_layout(0, 8.7e-3, 6.6e-3, 6.6e-3);
    s.bs_position = bs;
    s.bs_pattern = {0.0, 0.0};
    s.ue_pattern = {0.0, 0.0};
    s.element_pattern = {0.0, 0.0};
    return s;
}

double wrap_phase(double p)
{
    p = std::remainder(p, 2.0 * std::numbers::pi);
    return p <= -std::numbers::pi ? p + 2.0 * std::numbers::pi : p;
}

} // namespace

TEST_CASE("wavelength")
{
    Scenario s = Scenario::reference();
    CHECK(wavelength(s) == doctest::Approx(0.012596321764705882).epsilon(1e-15));
    s.frequency_hz = 299792458.0;
    CHECK(wavelength(s) == 1.0);
    Scenario half = Scenario::reference();
    half.frequency_hz = 11.9e9;
    CHECK(wavelength(half) == doctest::Approx(2.0 * wavelength(Scenario::reference())).epsilon(1e-15));
}

TEST_CASE("antenna pattern normalization")
{
    const auto horn = AntennaPattern::from_gain(19.0);
    CHECK(horn.exponent == doctest::Approx(std::pow(10.0, 1.9) / 2.0 - 1.0));
    CHECK(horn.exponent == doctest::Approx(38.7).epsilon(1e-3));
    for (const AntennaPattern p : {horn, AntennaPattern{0.0, 1.0}, AntennaPattern{0.0, 0.0}})
    {
        CHECK(p.value(1.0) == 1.0);
        for (double c = -1.0; c <= 1.0; c += 0.01)
        {
            const double v = p.value(c);
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
        }
    }
}

TEST_CASE("element_phasor on unit distances")
{
    const Scenario s = isotropic_single_element({1.0, 0.0, 0.0});
    const Vec3 ue{1.0, 0.0, 0.0};
    const auto g = element_phasor(s, 0, ue);
    CHECK(std::abs(g) == doctest::Approx(1.0).epsilon(1e-15));
    const double expected = wrap_phase(-2.0 * std::numbers::pi * 2.0 / wavelength(s));
    CHECK(std::arg(g) == doctest::Approx(expected).epsilon(1e-9));

    SUBCASE("doubling both distances quarters the magnitude")
    {
        const Scenario far = isotropic_single_element({2.0, 0.0, 0.0});
        CHECK(std::abs(element_phasor(far, 0, {2.0, 0.0, 0.0})) == doctest::Approx(0.25).epsilon(1e-15));
    }
}

TEST_CASE("element_phasor of the center element toward P1")
{
    // Frozen from tests/oracles/scalar_oracles.py (40-digit evaluation)
    const Scenario s = Scenario::reference();
    const Vec3 p1 = spherical_to_cartesian({1.4, 40.0, -16.0});
    const auto g = element_phasor(s, 0, p1);
    CHECK(std::abs(g) == doctest::Approx(0.29640508107019768).epsilon(1e-12));
    CHECK(std::arg(g) == doctest::Approx(1.2207589276420131).epsilon(1e-9));
    CHECK(combined_pattern(s, 0, p1) == doctest::Approx(0.59573518120430326).epsilon(1e-12));
}

TEST_CASE("combined_pattern")
{
    Scenario s = isotropic_single_element({1.0, 0.0, 0.0});
    s.bs_pattern = AntennaPattern::from_gain(19.0);
    s.element_pattern = {0.0, 3.0};
    CHECK(combined_pattern(s, 0, {2.0, 0.0, 0.0}) == doctest::Approx(1.0));

    s.element_pattern = {0.0, 1.0};
    const Vec3 ue60 = spherical_to_cartesian({1.0, 60.0, 0.0});
    CHECK(combined_pattern(s, 0, ue60) == doctest::Approx(0.5));

    CHECK(combined_pattern(s, 0, {-1.0, 0.2, 0.0}) == 0.0);
    s.element_pattern = {0.0, 0.0};
    CHECK(combined_pattern(s, 0, {-1.0, 0.2, 0.0}) == 0.0);
}

TEST_CASE("element_phasor rejects coincident points")
{
    const Scenario s = Scenario::reference();
    CHECK_THROWS_AS(element_phasor(s, 0, s.layout.elements[0]), GeometryError);
    CHECK_THROWS_AS(element_phasor(s, 5, s.layout.elements[5]), GeometryError);
}

TEST_CASE("received_power")
{
    const Scenario s = Scenario::reference();
    const Vec3 p1 = spherical_to_cartesian({1.4, 40.0, -16.0});

    SUBCASE("all-off config is below floor")
    {
        const RisConfig off{std::vector<ReflectionCoefficient>(s.layout.size(), {0.0, 0.0}), "off"};
        CHECK(is_below_floor(received_power(s, off, p1)));
    }

    SUBCASE("fully coherent sum")
    {
        const auto g = element_phasors(s, p1);
        RisConfig aligned;
        double magnitude_sum = 0.0;
        for (const auto &gm : g)
        {
            aligned.coefficients.push_back({0.3, -rad2deg(std::arg(gm))});
            magnitude_sum += 0.3 * std::abs(gm);
        }
        const double expected = 10.0 * std::log10(link_prefactor_mw(s) * magnitude_sum * magnitude_sum);
        CHECK(received_power(s, aligned, p1) == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("single element matches the analytic path formula")
    {
        Scenario one = s;
        one.layout = hex_layout(0, 8.7e-3, 6.6e-3, 6.6e-3);
        const RisConfig c{{{0.3, -15.0}}, "reflective"};
        // Frozen from tests/oracles/scalar_oracles.py
        CHECK(std::abs(received_power(one, c, p1) - (-98.022301880668395)) <= 1e-9);
    }

    SUBCASE("length mismatch")
    {
        const RisConfig short_config{{{0.3, -15.0}}, "reflective"};
        CHECK_THROWS_AS(received_power(s, short_config, p1), ValidationError);
    }
}

TEST_CASE("received_power properties on random configs")
{
    const Scenario s = Scenario::reference();
    const Vec3 p2 = spherical_to_cartesian({1.4, 10.0, -16.0});
    const auto g = element_phasors(s, p2);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mag(0.0, 1.5), phase(-179.0, 180.0);

    double upper = 0.0;
    for (const auto &gm : g)
        upper += std::abs(gm);

    for (int trial = 0; trial < 100; ++trial)
    {
        RisConfig c;
        double bound = 0.0;
        for (std::size_t m = 0; m < s.layout.size(); ++m)
        {
            c.coefficients.push_back({mag(rng), phase(rng)});
            bound += c.coefficients.back().magnitude * std::abs(g[m]);
        }
        const double p = received_power(s, c, p2);

        // triangle inequality
        REQUIRE(p <= 10.0 * std::log10(link_prefactor_mw(s) * bound * bound) + 1e-12);

        // common phase rotation
        RisConfig rotated = c;
        const double shift = phase(rng);
        for (auto &coef : rotated.coefficients)
            coef.phase_deg += shift;
        REQUIRE(std::abs(received_power(s, rotated, p2) - p) <= 1e-9);

        // transmit power enters linearly
        Scenario louder = s;
        louder.tx_power_dbm += 7.5;
        REQUIRE(std::abs(received_power(louder, c, p2) - (p + 7.5)) <= 1e-12);
    }
    CHECK(upper > 0.0);
}

TEST_CASE("path_phasor magnitude is symmetric in the two hop lengths")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(0.05, 5.0), f(0.0, 1.0);
    for (int k = 0; k < 1000; ++k)
    {
        const double a = d(rng), b = d(rng), pattern = f(rng);
        REQUIRE(std::abs(path_phasor(a, b, pattern, 0.0125)) == std::abs(path_phasor(b, a, pattern, 0.0125)));
    }
}

TEST_CASE("noise_floor")
{
    // Frozen from tests/oracles/scalar_oracles.py
    CHECK(noise_floor(293.0, 155e6, 50, 9.0) == doctest::Approx(-100.01687403133384).epsilon(1e-13));
    CHECK(std::abs(noise_floor(293.0, 155e6, 50, 9.0) + 100.0) <= 0.2);
    CHECK(noise_floor(290.0, 1.0, 1, 0.0) == doctest::Approx(-173.9751871942281).epsilon(1e-13));
    CHECK(noise_floor(293.0, 155e6, 4, 9.0) - noise_floor(293.0, 155e6, 16, 9.0) ==
          doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-12));
    CHECK_THROWS_AS(noise_floor(0.0, 1.0, 1, 0.0), ValidationError);
    CHECK_THROWS_AS(noise_floor(290.0, 1.0, 0, 0.0), ValidationError);
}

TEST_CASE("scenario validation")
{
    Scenario s = Scenario::reference();
    CHECK_NOTHROW(s.validate());
    s.frequency_hz = -1.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = Scenario::reference();
    s.bs_position.x = 0.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("dBm conversion and sentinel")
{
    CHECK(mw_to_dbm(1.0) == 0.0);
    CHECK(is_below_floor(mw_to_dbm(0.0)));
    CHECK(is_below_floor(mw_to_dbm(1e-26)));
    CHECK(!is_below_floor(mw_to_dbm(1e-24)));
    CHECK(dbm_to_mw(kBelowFloor) == 0.0);
}

TEST_CASE("fingerprints are stable and sensitive")
{
    const Scenario a = Scenario::reference();
    Scenario b = a;
    CHECK(fingerprint(a) == fingerprint(b));
    b.tx_power_dbm += 1.0;
    CHECK(fingerprint(a) != fingerprint(b));
    CHECK(fingerprint(a).size() == 16);

    const RisConfig c1{{{0.3, -15.0}, {0.3, 165.0}}, "reflective"};
    RisConfig c2 = c1;
    CHECK(config_hash(c1) == config_hash(c2));
    c2.coefficients[1] = {0.3, -15.0};
    CHECK(config_hash(c1) != config_hash(c2));
}
