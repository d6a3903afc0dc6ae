// SPDX-License-Identifier: Apache-2.0
#include "risfocus/errors.hpp"
#include "risfocus/optimizer.hpp"

#include <doctest.h>

#include <random>

using namespace risfocus;

namespace {

using Phasors = std::vector<std::complex<double>>;

Phasors random_phasors(std::mt19937_64 &rng, std::size_t m)
{
    std::uniform_real_distribution<double> mag(0.1, 1.0), ph(-std::numbers::pi, std::numbers::pi);
    Phasors g(m);
    for (auto &x : g)
        x = std::polar(mag(rng), ph(rng));
    return g;
}

double objective_of(const Phasors &g, const ReflectionAlphabet &a, const std::vector<std::size_t> &states)
{
    std::complex<double> sum{};
    for (std::size_t m = 0; m < g.size(); ++m)
        sum += a.states[states[m]].value() * g[m];
    return std::norm(sum);
}

double db(double ratio) { return 10.0 * std::log10(ratio); }

} // namespace

TEST_CASE("alphabets")
{
    const auto r = ReflectionAlphabet::reflective();
    REQUIRE(r.states.size() == 2);
    CHECK(r.states[0] == ReflectionCoefficient{0.3, -15.0});
    CHECK(r.states[1] == ReflectionCoefficient{0.3, 165.0});
    const auto a = ReflectionAlphabet::active();
    CHECK(a.states[0] == ReflectionCoefficient{1.25, 0.0});
    CHECK(a.states[1] == ReflectionCoefficient{0.0, 0.0});
    CHECK(ReflectionAlphabet::off_structural().states.size() == 1);
    CHECK(alphabet_by_name("active").name == "active");
    CHECK_THROWS_AS(alphabet_by_name("bogus"), ValidationError);

    ReflectionAlphabet dup{"dup", {{0.3, 0.0}, {0.3, 0.0}}};
    CHECK_THROWS_AS(dup.validate(), ValidationError);
    ReflectionAlphabet empty{"empty", {}};
    CHECK_THROWS_AS(empty.validate(), ValidationError);
}

TEST_CASE("single element picks the aligned state and breaks ties low")
{
    const auto r = ReflectionAlphabet::reflective();
    // g in phase with 15 deg: state 0 (-15 deg) aligns it.
    const Phasors g{std::polar(1.0, deg2rad(15.0))};
    const auto res = coordinate_ascent(g, r);
    CHECK(res.states == std::vector<std::size_t>{0});

    // Both reflective states have the same |Gamma g| so a single element is a tie.
    const Phasors g2{std::polar(1.0, deg2rad(-165.0))};
    CHECK(coordinate_ascent(g2, r).states == std::vector<std::size_t>{1});
    CHECK(exhaustive_search(g, r).states == std::vector<std::size_t>{0});
    CHECK(exhaustive_search(g2, r).states == std::vector<std::size_t>{0});
}

TEST_CASE("single-state alphabet yields the uniform config")
{
    std::mt19937_64 rng(1);
    const auto g = random_phasors(rng, 20);
    const auto res = coordinate_ascent(g, ReflectionAlphabet::off_structural());
    for (auto s : res.states)
        CHECK(s == 0);
    CHECK(res.converged);
}

TEST_CASE("active alphabet switches off destructive elements")
{
    const auto a = ReflectionAlphabet::active();
    const Phasors g{{1.0, 0.0}, {-0.5, 0.0}};
    const auto res = coordinate_ascent(g, a);
    CHECK(res.states == std::vector<std::size_t>{0, 1});
    CHECK(res.objective == doctest::Approx(1.5625));
}

TEST_CASE("coordinate ascent stays close to exhaustive search for M = 10")
{
    std::mt19937_64 rng(2024);
    int close = 0;
    for (int trial = 0; trial < 100; ++trial)
    {
        const auto g = random_phasors(rng, 10);
        for (const auto &alphabet : {ReflectionAlphabet::reflective(), ReflectionAlphabet::active()})
        {
            const auto fast = coordinate_ascent(g, alphabet);
            const auto best = exhaustive_search(g, alphabet);
            REQUIRE(best.objective >= fast.objective * (1.0 - 1e-12));
            if (alphabet.name == "reflective" && db(best.objective / fast.objective) <= 0.5)
                ++close;
        }
    }
    CHECK(close >= 95);
}

TEST_CASE("exhaustive search never loses for M = 12")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto g = random_phasors(rng, 12);
        const auto r = ReflectionAlphabet::reflective();
        REQUIRE(exhaustive_search(g, r).objective >= coordinate_ascent(g, r).objective * (1.0 - 1e-12));
    }
}

TEST_CASE("coordinate ascent invariants on random instances")
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> size(1, 127);
    for (int trial = 0; trial < 100; ++trial)
    {
        const auto g = random_phasors(rng, size(rng));
        for (const auto &alphabet : {ReflectionAlphabet::reflective(), ReflectionAlphabet::active()})
        {
            const auto res = coordinate_ascent(g, alphabet);
            REQUIRE(res.converged);
            REQUIRE(res.passes <= 10);
            REQUIRE(res.pass_objectives.size() == static_cast<std::size_t>(res.passes) + 1);
            for (std::size_t k = 1; k < res.pass_objectives.size(); ++k)
                REQUIRE(res.pass_objectives[k] >= res.pass_objectives[k - 1]);
            REQUIRE(res.objective == doctest::Approx(objective_of(g, alphabet, res.states)).epsilon(1e-12));

            // No single-element change improves the objective.
            auto states = res.states;
            for (std::size_t m = 0; m < g.size(); ++m)
            {
                const auto keep = states[m];
                for (std::size_t s = 0; s < alphabet.states.size(); ++s)
                {
                    states[m] = s;
                    REQUIRE(objective_of(g, alphabet, states) <= res.objective * (1.0 + 1e-9));
                }
                states[m] = keep;
            }

            if (alphabet.name == "active")
            {
                // Every element left on contributes constructively.
                std::complex<double> total{};
                for (std::size_t m = 0; m < g.size(); ++m)
                    total += alphabet.states[res.states[m]].value() * g[m];
                for (std::size_t m = 0; m < g.size(); ++m)
                    if (res.states[m] == 0)
                    {
                        const auto without = total - alphabet.states[0].value() * g[m];
                        REQUIRE(std::norm(total) >= std::norm(without) * (1.0 - 1e-12));
                    }
            }
        }
    }
}

TEST_CASE("optimization is deterministic")
{
    const Scenario s = Scenario::reference();
    const Vec3 p1 = spherical_to_cartesian({1.4, 40.0, -16.0});
    const auto a = optimize_config(s, p1, ReflectionAlphabet::reflective());
    const auto b = optimize_config(s, p1, ReflectionAlphabet::reflective());
    CHECK(a.states == b.states);
    CHECK(a.objective == b.objective);
    CHECK(config_hash(a.config) == config_hash(b.config));
    CHECK(a.config.size() == 127);
    CHECK_NOTHROW(validate_config(a.config, ReflectionAlphabet::reflective(), 127));
}

TEST_CASE("optimized config focuses on the target")
{
    const Scenario s = Scenario::reference();
    const Vec3 p1 = spherical_to_cartesian({1.4, 40.0, -16.0});
    const auto r = optimize_config(s, p1, ReflectionAlphabet::reflective());
    const auto a = optimize_config(s, p1, ReflectionAlphabet::active());
    const auto uniform = uniform_config(s.layout, {0.3, -15.0});
    const double p_r = received_power(s, r.config, p1);
    const double p_a = received_power(s, a.config, p1);
    CHECK(p_r > received_power(s, uniform, p1) + 10.0);
    CHECK(p_a - p_r >= 3.0);
    CHECK(p_a - p_r <= 8.0);
}

TEST_CASE("exhaustive search guard")
{
    const Phasors g(21, {1.0, 0.0});
    CHECK_THROWS_AS(exhaustive_search(g, ReflectionAlphabet::reflective()), ValidationError);
    const Phasors ok(20, {1.0, 0.0});
    CHECK_NOTHROW(exhaustive_search(ok, ReflectionAlphabet::off_structural()));
}

TEST_CASE("validate_config")
{
    const auto r = ReflectionAlphabet::reflective();
    const RisConfig good{{{0.3, -15.0}, {0.3, 165.0}}, "reflective"};
    CHECK_NOTHROW(validate_config(good, r, 2));
    CHECK_THROWS_AS(validate_config(good, r, 3), ValidationError);
    const RisConfig bad{{{0.3, -15.0}, {1.25, 0.0}}, "reflective"};
    CHECK_THROWS_AS(validate_config(bad, r, 2), ValidationError);
}

TEST_CASE("uniform_config")
{
    const auto layout = hex_layout(2, 8.7e-3, 6.6e-3, 6.6e-3);
    const auto c = uniform_config(layout, {0.16, 0.0}, "off_structural");
    CHECK(c.size() == 19);
    CHECK(c.alphabet_name == "off_structural");
    for (const auto &coef : c.coefficients)
        CHECK(coef == ReflectionCoefficient{0.16, 0.0});
}
