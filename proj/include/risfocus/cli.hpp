// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace risfocus {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;

// Runs one CLI invocation. `args` includes the program name. Returns 0 on
// success, 1 on validation errors (including unknown subcommands), 2 on
// numeric or geometry errors.
int cli_dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace risfocus
