#include "cbary/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cbary::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
