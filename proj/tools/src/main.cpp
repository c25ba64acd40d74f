#include <iostream>

#include "patcheck/cli.hpp"

int main(int argc, char** argv) { return patcheck::run_cli(argc, argv, std::cout, std::cerr); }
