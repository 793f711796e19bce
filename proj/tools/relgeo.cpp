#include <iostream>
#include <string>
#include <vector>

#include "relgeo/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return relgeo::cli::run(args, std::cout, std::cerr);
}
