#include <iostream>

#include "nvsyn/cli.hpp"

int main(int argc, char** argv) { return nvsyn::run_cli(argc, argv, std::cout, std::cerr); }
