#include <iostream>

#include "kappamax/cli.hpp"

int main(int argc, char** argv) {
  return kappamax::cli::run_cli(argc, argv, std::cout, std::cerr);
}
