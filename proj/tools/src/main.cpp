// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "caffine_cli/cli.hpp"

int main(int argc, char** argv) { return caffine::cli::main_entry(argc, argv, std::cout, std::cerr); }
