#include <iostream>

#include "fimsim/cli.hpp"

int main(int argc, char** argv) { return fimsim::cli_main(argc, argv, std::cout, std::cerr); }
