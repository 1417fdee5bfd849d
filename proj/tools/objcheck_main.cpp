#include "objcheck/cli.hpp"

#include <unistd.h>

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return objcheck::run(args, std::cout, std::cerr, isatty(STDOUT_FILENO) != 0);
}
