#include <iostream>
#include <string>
#include <vector>

#include "alt/cli.hpp"

int main(int argc, char** argv) {
  return alt::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
