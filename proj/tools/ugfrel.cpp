#include <iostream>
#include <string>
#include <vector>

#include "ugf/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return ugf::run_cli(args, std::cout, std::cerr);
}
