#include <iostream>
#include <string>
#include <vector>

#include "priorart/pipeline.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return priorart::run_command(args, std::cout, std::cerr);
}
