#include <iostream>
#include <string>
#include <vector>

#include "dinikit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dinikit::run(args, std::cout, std::cerr);
}
