#include <iostream>
#include <string>
#include <vector>

#include "actpres/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return actpres::cli::cli_main(args, std::cout, std::cerr);
}
