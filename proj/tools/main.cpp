#include <iostream>

#include "lexdecline/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lexdecline::dispatch(args, std::cout, std::cerr);
}
