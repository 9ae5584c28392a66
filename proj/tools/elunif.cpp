#include <iostream>

#include "elunif/cli.hpp"

int main(int argc, char** argv) { return elunif::run_cli(argc, argv, std::cout, std::cerr); }
