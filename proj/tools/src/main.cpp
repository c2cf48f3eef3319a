#include <iostream>

#include "phylocompat_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return phylocompat::cli::run(args, std::cout, std::cerr);
}
