#include "hsde/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hsde::run_cli(argc, argv, std::cout, std::cerr); }
