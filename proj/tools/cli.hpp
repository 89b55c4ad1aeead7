// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_TOOLS_CLI_HPP
#define FOCKHOM_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fockhom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the fockhom command line; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fockhom::cli

#endif
