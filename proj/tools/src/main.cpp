#include <iostream>

#include "sscomp_tools/cli.hpp"

int main(int argc, char** argv) {
  return sscomp::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
