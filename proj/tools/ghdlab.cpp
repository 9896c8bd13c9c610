#include <iostream>

#include "ghd/cli.hpp"

int main(int argc, char** argv) { return ghd::run_cli(argc, argv, std::cout, std::cerr); }
