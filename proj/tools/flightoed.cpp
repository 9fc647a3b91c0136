#include <iostream>
#include <string>
#include <vector>

#include "flightoed/cli.hpp"

int main(int argc, char** argv) {
  return flightoed::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
