#include <iostream>
#include <string>
#include <vector>

#include "gazedoc_tools/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gazedoc::cli::run_cli(args, std::cout, std::cerr);
}
