#include <iostream>
#include <string>
#include <vector>

#include "spider/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spider::run_cli(args, std::cout, std::cerr);
}
