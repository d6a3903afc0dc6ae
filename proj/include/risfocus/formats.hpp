// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risfocus/optimizer.hpp"
#include "risfocus/planner.hpp"
#include "risfocus/sweep.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace risfocus {

// PowerGrid CSV:
//   # x0,y0,dx,dy,nx,ny,z_plane,label
//   # <x0>,<y0>,<dx>,<dy>,<nx>,<ny>,<z_plane>,<label>
//   i,j,x,y,power_dbm        (one line per cell, i outer, j inner)
// Numbers use 6 significant digits; the below-floor sentinel is "-inf".
void write_power_grid_csv(std::ostream &out, const PowerGrid &grid);
PowerGrid read_power_grid_csv(std::istream &in);
PowerGrid read_power_grid_csv(const std::filesystem::path &path);

// index,x_m,y_m,z_m
void write_layout_csv(std::ostream &out, const RisLayout &layout);

// # alphabet=<name>
// index,state,magnitude,phase_deg
void write_config_csv(std::ostream &out, const RisConfig &config, const ReflectionAlphabet &alphabet);
RisConfig read_config_csv(std::istream &in, const ReflectionAlphabet &alphabet, std::size_t elements);
RisConfig read_config_csv(const std::filesystem::path &path, const ReflectionAlphabet &alphabet, std::size_t elements);

// t_s,x,y,z,config_hash,rho_a,rho_r
void write_schedule_csv(std::ostream &out, const UpdateSchedule &schedule);

// Binary 8-bit PGM, one pixel per cell: column i, row j (row 0 = first y
// sample). Linear map of [min_dbm, max_dbm] onto [0, 255] with clamping;
// below-floor cells are black.
std::string encode_pgm(const PowerGrid &grid, double min_dbm, double max_dbm);
void export_heatmap(const PowerGrid &grid, double min_dbm, double max_dbm, const std::filesystem::path &path);

// %.6g, with "-inf" for the sentinel.
std::string format_g6(double v);

} // namespace risfocus
