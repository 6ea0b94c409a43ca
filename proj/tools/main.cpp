#include <iostream>

#include "hampath/cli.hpp"

int main(int argc, char** argv) {
  return hampath::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
