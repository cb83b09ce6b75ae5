#include <iostream>
#include <string>
#include <vector>

#include "urysohn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return urysohn::cli::run(args, std::cout, std::cerr);
}
