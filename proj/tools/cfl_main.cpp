#include "cfl/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cfl::cli::run(argc, argv, std::cout, std::cerr); }
