// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include <iostream>
#include <string>
#include <vector>

#include "mae/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mae::cli::run(args, std::cout, std::cerr);
}
