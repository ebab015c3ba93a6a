#include <iostream>
#include <vector>

#include "cts/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cts::io::run_command(args, std::cout, std::cerr);
}
