#pragma once

// Command-line driver.

#include <iostream>
#include <string>
#include <vector>

namespace splitlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitSolver = 2;

std::string usage();

/// Round-trip formatting for doubles.
std::string num(double v);

/// Runs one subcommand; returns 0 on success, 1 on invalid input, 2 on solver failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr);

int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace splitlab::cli
