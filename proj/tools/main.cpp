#include <iostream>

#include "united/cli.hpp"

int main(int argc, char** argv) {
  return united::cli_main(argc, argv, std::cout, std::cerr);
}
