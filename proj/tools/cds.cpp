#include <iostream>
#include <string>
#include <vector>

#include "cds/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cds::cli::run(args, std::cout, std::cerr);
}
