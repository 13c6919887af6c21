// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"

int main(int argc, char **argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return bellsim::cli::run_cli(args, std::cout, std::cerr);
}
