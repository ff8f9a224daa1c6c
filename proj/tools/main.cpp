// SPDX-License-Identifier: Apache-2.0
#include <vector>

#include "windquad/cli.hpp"

int main(int argc, char** argv) {
  return windquad::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
