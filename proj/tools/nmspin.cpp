// nmspin.cpp - Command-line entry point

#include <iostream>

#include "nmspin/harness/cli.hpp"

int main(int argc, char** argv) { return nmspin::harness::run_cli(argc, argv, std::cout, std::cerr); }
