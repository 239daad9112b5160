#include <iostream>
#include <string>
#include <vector>

#include "sl2pke/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sl2pke::cli::run(args, std::cout, std::cerr);
}
