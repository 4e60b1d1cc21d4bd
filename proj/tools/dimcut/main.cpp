#include <iostream>
#include <string>
#include <vector>

#include "dimcut/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dimcut::cli::main_with_args(args, std::cout, std::cerr);
}
