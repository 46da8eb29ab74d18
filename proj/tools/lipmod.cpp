#include <iostream>

#include "lipmod/cli.hpp"

int main(int argc, char** argv) {
  return lipmod::cli::run(argc, argv, std::cout, std::cerr);
}
