#include <iostream>

#include "gccrr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gccrr::run_cli(args, std::cout, std::cerr);
}
