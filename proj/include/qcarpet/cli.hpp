#pragma once

#include <string>
#include <vector>

namespace qcarpet::cli {

/// Runs the command-line driver. Exit codes are a stable contract:
/// 0 success, 1 tolerance failure, 2 usage/validation/parse error.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace qcarpet::cli
