// SPDX-License-Identifier: Apache-2.0
#include "risfocus/formats.hpp"
#include "risfocus/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace risfocus {

namespace {

std::string format_g(double v, int digits)
{
    if (std::isinf(v))
        return v < 0 ? "-inf" : "inf";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::vector<std::string> split(const std::string &line, char sep = ',')
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep))
        out.push_back(field);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

double parse_double(const std::string &s, std::size_t line_no)
{
    if (s == "-inf")
        return kBelowFloor;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("line " + std::to_string(line_no) + ": invalid number '" + s + "'");
    return v;
}

int parse_int(const std::string &s, std::size_t line_no)
{
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("line " + std::to_string(line_no) + ": invalid integer '" + s + "'");
    return v;
}

std::string strip_cr(std::string line)
{
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

} // namespace

std::string format_g6(double v)
{
    return format_g(v, 6);
}

void write_power_grid_csv(std::ostream &out, const PowerGrid &grid)
{
    const GridSpec &g = grid.spec;
    out << "# x0,y0,dx,dy,nx,ny,z_plane,label\n";
    out << "# " << format_g6(g.x0) << ',' << format_g6(g.y0) << ',' << format_g6(g.dx) << ',' << format_g6(g.dy)
        << ',' << g.nx << ',' << g.ny << ',' << format_g6(g.z_plane) << ',' << grid.label << '\n';
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            out << i << ',' << j << ',' << format_g6(g.x(i)) << ',' << format_g6(g.y(j)) << ','
                << format_g6(grid.at(i, j)) << '\n';
}

PowerGrid read_power_grid_csv(std::istream &in)
{
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line))
            return false;
        line = strip_cr(line);
        ++line_no;
        return true;
    };

    if (!next_line() || line != "# x0,y0,dx,dy,nx,ny,z_plane,label")
        throw ValidationError("power grid CSV: line 1: missing '# x0,y0,dx,dy,nx,ny,z_plane,label' header");
    if (!next_line() || line.rfind("# ", 0) != 0)
        throw ValidationError("power grid CSV: line 2: missing grid metadata");
    const auto meta = split(line.substr(2));
    if (meta.size() < 8)
        throw ValidationError("power grid CSV: line 2: expected 8 metadata fields");

    PowerGrid grid;
    grid.spec.x0 = parse_double(meta[0], line_no);
    grid.spec.y0 = parse_double(meta[1], line_no);
    grid.spec.dx = parse_double(meta[2], line_no);
    grid.spec.dy = parse_double(meta[3], line_no);
    grid.spec.nx = parse_int(meta[4], line_no);
    grid.spec.ny = parse_int(meta[5], line_no);
    grid.spec.z_plane = parse_double(meta[6], line_no);
    // the label is free text and may itself contain commas
    std::string label = meta[7];
    for (std::size_t k = 8; k < meta.size(); ++k)
        label += "," + meta[k];
    grid.label = label;
    grid.spec.validate();
    grid.values.assign(grid.spec.size(), kBelowFloor);

    std::vector<bool> seen(grid.spec.size(), false);
    while (next_line())
    {
        if (line.empty())
            continue;
        const auto f = split(line);
        if (f.size() != 5)
            throw ValidationError("power grid CSV: line " + std::to_string(line_no) + ": expected 5 fields");
        const int i = parse_int(f[0], line_no);
        const int j = parse_int(f[1], line_no);
        if (i < 0 || i >= grid.spec.nx || j < 0 || j >= grid.spec.ny)
            throw ValidationError("power grid CSV: line " + std::to_string(line_no) + ": cell index out of range");
        const auto k = static_cast<std::size_t>(i) * grid.spec.ny + j;
        if (seen[k])
            throw ValidationError("power grid CSV: line " + std::to_string(line_no) + ": duplicate cell");
        seen[k] = true;
        grid.values[k] = parse_double(f[4], line_no);
    }
    for (bool s : seen)
        if (!s)
            throw ValidationError("power grid CSV: missing cells");
    return grid;
}

PowerGrid read_power_grid_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read power grid '" + path.string() + "'");
    return read_power_grid_csv(in);
}

void write_layout_csv(std::ostream &out, const RisLayout &layout)
{
    out << "index,x_m,y_m,z_m\n";
    for (std::size_t m = 0; m < layout.size(); ++m)
    {
        const Vec3 &u = layout.elements[m];
        out << m << ',' << format_g(u.x, 9) << ',' << format_g(u.y, 9) << ',' << format_g(u.z, 9) << '\n';
    }
}

void write_config_csv(std::ostream &out, const RisConfig &config, const ReflectionAlphabet &alphabet)
{
    out << "# alphabet=" << config.alphabet_name << '\n';
    out << "index,state,magnitude,phase_deg\n";
    for (std::size_t m = 0; m < config.size(); ++m)
    {
        const auto &c = config.coefficients[m];
        const auto state = alphabet.index_of(c);
        if (!state)
            throw ValidationError("config coefficient " + std::to_string(m) + " is not in alphabet '" +
                                  alphabet.name + "'");
        out << m << ',' << *state << ',' << format_g(c.magnitude, 9) << ',' << format_g(c.phase_deg, 9) << '\n';
    }
}

RisConfig read_config_csv(std::istream &in, const ReflectionAlphabet &alphabet, std::size_t elements)
{
    std::string line;
    std::size_t line_no = 0;
    RisConfig config;
    config.alphabet_name = alphabet.name;
    bool header_seen = false;
    while (std::getline(in, line))
    {
        line = strip_cr(line);
        ++line_no;
        if (line.empty())
            continue;
        if (line.rfind("# alphabet=", 0) == 0)
        {
            const std::string name = line.substr(11);
            if (name != alphabet.name)
                throw ValidationError("config file: alphabet '" + name + "' does not match '" + alphabet.name + "'");
            continue;
        }
        if (line[0] == '#')
            continue;
        if (!header_seen)
        {
            if (line != "index,state,magnitude,phase_deg")
                throw ValidationError("config file: line " + std::to_string(line_no) + ": unexpected header");
            header_seen = true;
            continue;
        }
        const auto f = split(line);
        if (f.size() != 4)
            throw ValidationError("config file: line " + std::to_string(line_no) + ": expected 4 fields");
        if (parse_int(f[0], line_no) != static_cast<int>(config.size()))
            throw ValidationError("config file: line " + std::to_string(line_no) + ": indices must be consecutive");
        const int state = parse_int(f[1], line_no);
        if (state < 0 || static_cast<std::size_t>(state) >= alphabet.states.size())
            throw ValidationError("config file: line " + std::to_string(line_no) + ": state index out of range");
        config.coefficients.push_back(alphabet.states[static_cast<std::size_t>(state)]);
    }
    validate_config(config, alphabet, elements);
    return config;
}

RisConfig read_config_csv(const std::filesystem::path &path, const ReflectionAlphabet &alphabet, std::size_t elements)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read config file '" + path.string() + "'");
    return read_config_csv(in, alphabet, elements);
}

void write_schedule_csv(std::ostream &out, const UpdateSchedule &schedule)
{
    out << "t_s,x,y,z,config_hash,rho_a,rho_r\n";
    for (const auto &ev : schedule.events)
        out << format_g(ev.t_s, 9) << ',' << format_g(ev.position.x, 9) << ',' << format_g(ev.position.y, 9) << ','
            << format_g(ev.position.z, 9) << ',' << ev.config_hash << ',' << format_g(ev.ellipse.rho_a, 9) << ','
            << format_g(ev.ellipse.rho_r, 9) << '\n';
}

std::string encode_pgm(const PowerGrid &grid, double min_dbm, double max_dbm)
{
    if (!(min_dbm < max_dbm))
        throw ValidationError("heatmap: min_dbm must be < max_dbm");
    const int width = grid.spec.nx;
    const int height = grid.spec.ny;
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    const std::size_t header = out.size();
    out.resize(header + static_cast<std::size_t>(width) * height);
    for (int j = 0; j < height; ++j)
        for (int i = 0; i < width; ++i)
        {
            const double v = grid.at(i, j);
            unsigned char px = 0;
            if (!is_below_floor(v))
            {
                const double t = std::clamp((v - min_dbm) / (max_dbm - min_dbm), 0.0, 1.0);
                px = static_cast<unsigned char>(std::lround(t * 255.0));
            }
            out[header + static_cast<std::size_t>(j) * width + i] = static_cast<char>(px);
        }
    return out;
}

void export_heatmap(const PowerGrid &grid, double min_dbm, double max_dbm, const std::filesystem::path &path)
{
    const std::string bytes = encode_pgm(grid, min_dbm, max_dbm);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write heatmap '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw ValidationError("failed writing heatmap '" + path.string() + "'");
}

} // namespace risfocus
