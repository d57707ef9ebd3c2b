#include <iostream>
#include <string>
#include <vector>

#include "equichroma/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return equichroma::run(args, std::cin, std::cout, std::cerr);
}
