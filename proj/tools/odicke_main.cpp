#include <iostream>

#include "odicke/cli.hpp"

int main(int argc, char** argv) {
  return odicke::run_cli(argc, argv, std::cout, std::cerr);
}
