#include <iostream>

#include "hbarcheck/cli.hpp"

int main(int argc, char** argv) {
  return hbarcheck::cli::run(argc, argv, std::cout, std::cerr);
}
