// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "tnav/cli.hpp"

int main(int argc, char** argv) { return tnav::cli_dispatch(argc, argv, std::cout, std::cerr); }
