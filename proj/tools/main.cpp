#include <iostream>
#include <string>
#include <vector>

#include "apifsm/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return apifsm::cli_main(args, std::cout, std::cerr);
}
