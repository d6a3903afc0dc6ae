// SPDX-License-Identifier: Apache-2.0
#include "risfocus/scenario_io.hpp"
#include "risfocus/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace risfocus {

using nlohmann::json;

namespace {

// Reads keys out of one JSON object, remembering which ones were consumed so
// that leftovers can be reported as unknown.
class ObjectReader
{
public:
    ObjectReader(const json &obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object())
            throw ValidationError(where() + " must be an object");
    }

    ~ObjectReader() = default;

    template <typename T>
    void read(const char *key, T &out)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null())
            return;
        try
        {
            if constexpr (std::is_same_v<T, double>)
            {
                if (!it->is_number())
                    throw std::invalid_argument("expected a number");
                out = it->template get<double>();
                if (!std::isfinite(out))
                    throw std::invalid_argument("must be finite");
            }
            else if constexpr (std::is_same_v<T, int>)
            {
                if (!it->is_number_integer())
                    throw std::invalid_argument("expected an integer");
                out = it->template get<int>();
            }
            else if constexpr (std::is_same_v<T, std::uint64_t>)
            {
                if (!it->is_number_unsigned() && !(it->is_number_integer() && it->template get<long long>() >= 0))
                    throw std::invalid_argument("expected a non-negative integer");
                out = it->template get<std::uint64_t>();
            }
            else if constexpr (std::is_same_v<T, bool>)
            {
                if (!it->is_boolean())
                    throw std::invalid_argument("expected true or false");
                out = it->template get<bool>();
            }
            else if constexpr (std::is_same_v<T, std::string>)
            {
                if (!it->is_string())
                    throw std::invalid_argument("expected a string");
                out = it->template get<std::string>();
            }
            else if constexpr (std::is_same_v<T, std::optional<double>>)
            {
                if (!it->is_number())
                    throw std::invalid_argument("expected a number or null");
                out = it->template get<double>();
            }
        }
        catch (const std::exception &e)
        {
            throw ValidationError(key_path(key) + ": " + e.what());
        }
    }

    const json *child(const char *key)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() || it->is_null() ? nullptr : &*it;
    }

    void reject_unknown() const
    {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ValidationError("unknown key '" + key_path(it.key()) + "'");
    }

    std::string key_path(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    std::string where() const { return path_.empty() ? "document" : "'" + path_ + "'"; }

    const json &obj_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string &key, const std::string &what)
{
    if (!ok)
        throw ValidationError(key + ": " + what);
}

bool is_blank(std::string_view text)
{
    return text.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

} // namespace

Scenario ScenarioSettings::scenario() const
{
    Scenario s;
    s.frequency_hz = frequency_ghz * 1e9;
    s.tx_power_dbm = tx_power_dbm;
    s.bs_position = spherical_to_cartesian(bs);
    s.bs_pattern = AntennaPattern::from_gain(bs_gain_dbi);
    if (bs_pattern_q)
        s.bs_pattern.exponent = *bs_pattern_q;
    s.ue_pattern = {ue_gain_dbi, ue_pattern_q};
    s.element_pattern = {0.0, element_pattern_q};
    s.layout = hex_layout(rings, pitch_mm * 1e-3, element_dy_mm * 1e-3, element_dz_mm * 1e-3);
    s.validate();
    return s;
}

GridSpec ScenarioSettings::grid_spec() const
{
    GridSpec g = grid;
    if (points_compat)
        g.nx -= 1;
    g.validate();
    return g;
}

SounderParams ScenarioSettings::sounder_params() const
{
    SounderParams p = sounder;
    p.bandwidth_hz = bandwidth_mhz * 1e6;
    return p;
}

ReflectionAlphabet ScenarioSettings::alphabet_named(std::string_view name) const
{
    return alphabet_by_name(name, off_state);
}

ReflectionAlphabet ScenarioSettings::selected_alphabet() const
{
    return alphabet_named(alphabet);
}

SphericalCoord ScenarioSettings::target(std::string_view name_or_literal) const
{
    for (const auto &t : targets)
        if (t.name == name_or_literal)
            return t.position;

    double v[3];
    std::string_view rest = name_or_literal;
    for (int k = 0; k < 3; ++k)
    {
        const auto comma = rest.find(',');
        const std::string_view field = rest.substr(0, comma);
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v[k]);
        if (ec != std::errc{} || ptr != field.data() + field.size() || (k < 2) == (comma == std::string_view::npos))
            throw ValidationError("unknown target '" + std::string(name_or_literal) +
                                  "' (expected a target name or 'range_m,azimuth_deg,elevation_deg')");
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    SphericalCoord s{v[0], v[1], v[2]};
    s.validate();
    return s;
}

void ScenarioSettings::validate() const
{
    require(frequency_ghz > 0.0, "frequency_ghz", "must be > 0");
    require(bs.r > 0.0, "bs.range_m", "must be > 0");
    try
    {
        bs.validate();
    }
    catch (const ValidationError &e)
    {
        throw ValidationError(std::string("bs: ") + e.what());
    }
    require(std::abs(spherical_to_cartesian(bs).x) > 0.0, "bs", "BS must not lie in the RIS plane");
    require(!bs_pattern_q || *bs_pattern_q >= 0.0, "bs.pattern_q", "must be >= 0");
    require(ue_pattern_q >= 0.0, "ue.pattern_q", "must be >= 0");
    require(rings >= 0, "ris.rings", "must be >= 0");
    require(pitch_mm > 0.0, "ris.pitch_mm", "must be > 0");
    require(element_dy_mm > 0.0, "ris.element_dy_mm", "must be > 0");
    require(element_dz_mm > 0.0, "ris.element_dz_mm", "must be > 0");
    require(element_pattern_q >= 0.0, "ris.element_pattern_q", "must be >= 0");
    require(off_state.magnitude >= 0.0, "ris.off_state_magnitude", "must be >= 0");
    require(grid.nx >= 1 && grid.ny >= 1, "grid.nx/ny", "must be >= 1");
    require(grid.dx > 0.0 && grid.dy > 0.0, "grid.dx_m/dy_m", "must be > 0");
    require(!points_compat || grid.nx >= 2, "grid.points_compat", "needs nx >= 2");
    try
    {
        sounder_params().validate();
        alphabet_by_name(alphabet, off_state);
    }
    catch (const ValidationError &e)
    {
        throw ValidationError(std::string(e.what()));
    }
    std::set<std::string> names;
    for (const auto &t : targets)
    {
        require(!t.name.empty(), "targets.name", "must be non-empty");
        require(names.insert(t.name).second, "targets.name", "duplicate target '" + t.name + "'");
        try
        {
            t.position.validate();
        }
        catch (const ValidationError &e)
        {
            throw ValidationError("targets." + t.name + ": " + e.what());
        }
    }
}

ScenarioSettings parse_scenario(std::string_view text, std::string_view source)
{
    json doc = json::object();
    if (!is_blank(text))
    {
        try
        {
            doc = json::parse(text.begin(), text.end());
        }
        catch (const json::parse_error &e)
        {
            // nlohmann reports "at line L, column C" inside what()
            throw ValidationError(std::string(source) + ": parse error: " + e.what());
        }
    }

    ScenarioSettings s;
    ObjectReader root(doc, "");
    root.read("frequency_ghz", s.frequency_ghz);
    root.read("tx_power_dbm", s.tx_power_dbm);
    root.read("alphabet", s.alphabet);

    if (const json *bs = root.child("bs"))
    {
        ObjectReader r(*bs, "bs");
        r.read("range_m", s.bs.r);
        r.read("azimuth_deg", s.bs.azimuth_deg);
        r.read("elevation_deg", s.bs.elevation_deg);
        r.read("gain_dbi", s.bs_gain_dbi);
        r.read("pattern_q", s.bs_pattern_q);
        r.reject_unknown();
    }
    if (const json *ue = root.child("ue"))
    {
        ObjectReader r(*ue, "ue");
        r.read("gain_dbi", s.ue_gain_dbi);
        r.read("pattern_q", s.ue_pattern_q);
        r.reject_unknown();
    }
    std::optional<int> element_count;
    if (const json *ris = root.child("ris"))
    {
        ObjectReader r(*ris, "ris");
        r.read("rings", s.rings);
        r.read("pitch_mm", s.pitch_mm);
        r.read("element_dy_mm", s.element_dy_mm);
        r.read("element_dz_mm", s.element_dz_mm);
        r.read("element_pattern_q", s.element_pattern_q);
        r.read("off_state_magnitude", s.off_state.magnitude);
        r.read("off_state_phase_deg", s.off_state.phase_deg);
        int count = -1;
        r.read("element_count", count);
        if (count >= 0 || ris->contains("element_count"))
            element_count = count;
        r.reject_unknown();
    }
    if (const json *grid = root.child("grid"))
    {
        ObjectReader r(*grid, "grid");
        r.read("x0_m", s.grid.x0);
        r.read("y0_m", s.grid.y0);
        r.read("dx_m", s.grid.dx);
        r.read("dy_m", s.grid.dy);
        r.read("nx", s.grid.nx);
        r.read("ny", s.grid.ny);
        r.read("z_plane_m", s.grid.z_plane);
        r.read("points_compat", s.points_compat);
        r.reject_unknown();
    }
    if (const json *snd = root.child("sounder"))
    {
        ObjectReader r(*snd, "sounder");
        r.read("averages", s.sounder.averages);
        r.read("n1", s.sounder.n1);
        r.read("n2", s.sounder.n2);
        r.read("signal_tap", s.sounder.signal_tap);
        r.read("noise_figure_db", s.sounder.noise_figure_db);
        r.read("temperature_k", s.sounder.temperature_k);
        r.read("bandwidth_mhz", s.bandwidth_mhz);
        r.read("seed", s.sounder.rng_seed);
        r.read("noise_enabled", s.sounder.noise_enabled);
        r.reject_unknown();
    }
    if (const json *targets = root.child("targets"))
    {
        if (!targets->is_array())
            throw ValidationError("targets: expected an array");
        s.targets.clear();
        for (std::size_t k = 0; k < targets->size(); ++k)
        {
            ObjectReader r((*targets)[k], "targets[" + std::to_string(k) + "]");
            NamedTarget t{"", {1.4, 0.0, -16.0}};
            r.read("name", t.name);
            r.read("range_m", t.position.r);
            r.read("azimuth_deg", t.position.azimuth_deg);
            r.read("elevation_deg", t.position.elevation_deg);
            r.reject_unknown();
            s.targets.push_back(t);
        }
    }
    root.reject_unknown();

    s.validate();
    if (element_count && *element_count != static_cast<int>(centered_hex_count(s.rings)))
        throw ValidationError("ris.element_count: " + std::to_string(*element_count) + " does not match rings = " +
                              std::to_string(s.rings) + " (" + std::to_string(centered_hex_count(s.rings)) + ")");
    return s;
}

ScenarioSettings load_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot read scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

std::string echo_scenario(const ScenarioSettings &s)
{
    const Scenario resolved = s.scenario();
    json doc;
    doc["frequency_ghz"] = s.frequency_ghz;
    doc["tx_power_dbm"] = s.tx_power_dbm;
    doc["alphabet"] = s.alphabet;
    doc["bs"] = {{"range_m", s.bs.r},
                 {"azimuth_deg", s.bs.azimuth_deg},
                 {"elevation_deg", s.bs.elevation_deg},
                 {"gain_dbi", s.bs_gain_dbi},
                 {"pattern_q", resolved.bs_pattern.exponent}};
    doc["ue"] = {{"gain_dbi", s.ue_gain_dbi}, {"pattern_q", s.ue_pattern_q}};
    doc["ris"] = {{"rings", s.rings},
                  {"element_count", static_cast<int>(resolved.layout.size())},
                  {"pitch_mm", s.pitch_mm},
                  {"element_dy_mm", s.element_dy_mm},
                  {"element_dz_mm", s.element_dz_mm},
                  {"element_pattern_q", s.element_pattern_q},
                  {"off_state_magnitude", s.off_state.magnitude},
                  {"off_state_phase_deg", s.off_state.phase_deg}};
    doc["grid"] = {{"x0_m", s.grid.x0}, {"y0_m", s.grid.y0}, {"dx_m", s.grid.dx},   {"dy_m", s.grid.dy},
                   {"nx", s.grid.nx},   {"ny", s.grid.ny},   {"z_plane_m", s.grid.z_plane},
                   {"points_compat", s.points_compat}};
    doc["sounder"] = {{"averages", s.sounder.averages},
                      {"n1", s.sounder.n1},
                      {"n2", s.sounder.n2},
                      {"signal_tap", s.sounder.signal_tap},
                      {"noise_figure_db", s.sounder.noise_figure_db},
                      {"temperature_k", s.sounder.temperature_k},
                      {"bandwidth_mhz", s.bandwidth_mhz},
                      {"seed", s.sounder.rng_seed},
                      {"noise_enabled", s.sounder.noise_enabled}};
    json targets = json::array();
    for (const auto &t : s.targets)
        targets.push_back({{"name", t.name},
                           {"range_m", t.position.r},
                           {"azimuth_deg", t.position.azimuth_deg},
                           {"elevation_deg", t.position.elevation_deg}});
    doc["targets"] = targets;
    return doc.dump(2) + "\n";
}

} // namespace risfocus
