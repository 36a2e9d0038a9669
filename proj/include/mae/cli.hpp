// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mae::cli {

/// Exit codes: 0 success, 1 toolkit error, 2 usage error, 3 report problems.
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitReportProblems = 3;

/// Runs one `mae` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mae::cli
