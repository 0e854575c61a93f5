#include <iostream>

#include "if2ode/cli.hpp"

int main(int argc, char** argv) {
  return if2ode::cli::run(argc, argv, std::cout, std::cerr);
}
