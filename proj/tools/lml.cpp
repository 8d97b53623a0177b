#include <iostream>

#include "lml/cli.hpp"

int main(int argc, char** argv) {
  return lml::cli::run(argc, argv, std::cout, std::cerr);
}
