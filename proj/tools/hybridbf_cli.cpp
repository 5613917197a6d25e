#include <iostream>

#include "hybridbf/cli.hpp"

int main(int argc, char** argv) {
  return hybridbf::cli::run(argc, argv, std::cout, std::cerr);
}
