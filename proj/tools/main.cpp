#include <iostream>

#include "markovcopula/cli.hpp"

int main(int argc, char** argv) {
  return markovcopula::cli::run(argc, argv, std::cout, std::cerr);
}
