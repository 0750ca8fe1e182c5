#include <iostream>
#include <string>
#include <vector>

#include "flipmix/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return flipmix::cli::run(args, std::cout, std::cerr);
}
