#include <iostream>

#include "okra/cli.hpp"

int main(int argc, char** argv) {
  return okra::run(argc, argv, std::cout, std::cerr);
}
