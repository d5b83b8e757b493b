#include <iostream>
#include <string>
#include <vector>

#include "optomech_cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return optomech::cli::run_command(args, std::cout, std::cerr);
}
