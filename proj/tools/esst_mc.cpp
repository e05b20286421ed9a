#include <iostream>

#include "esst/cli/cli.hpp"

int main(int argc, char** argv) { return esst::cli::run_cli(argc, argv, std::cout, std::cerr); }
