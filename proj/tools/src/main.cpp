#include <iostream>

#include "signaling_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return signaling::cli::run(args, std::cout, std::cerr);
}
