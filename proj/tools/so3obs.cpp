#include <iostream>

#include "so3obs/cli.hpp"

int main(int argc, char** argv) {
  return so3obs::run_cli(argc, argv, std::cout, std::cerr);
}
