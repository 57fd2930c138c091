#include <iostream>
#include <string>
#include <vector>

#include "roughlim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return roughlim::cli::run(args, std::cout, std::cerr);
}
