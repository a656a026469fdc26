#include <iostream>

#include "cantordyn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cdyn::run(args, std::cout, std::cerr);
}
