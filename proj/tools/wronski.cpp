#include <iostream>
#include <string>
#include <vector>

#include "wronski/cli.hpp"

int main(int argc, char** argv) {
  return wronski::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
