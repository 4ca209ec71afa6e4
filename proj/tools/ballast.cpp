#include <iostream>

#include "ballast/cli.hpp"

int main(int argc, char** argv) { return ballast::cli::run(argc, argv, std::cout, std::cerr); }
