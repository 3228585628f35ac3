#include <iostream>
#include <string>
#include <vector>

#include "backstab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return backstab::cli::run(args, std::cout, std::cerr);
}
