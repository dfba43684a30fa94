// SPDX-License-Identifier: Apache-2.0

#include "qres/cli.hpp"

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qres::cli::run(std::move(args), std::cout, std::cerr);
}
