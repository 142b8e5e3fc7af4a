#include <iostream>

#include "lsle/cli.hpp"

int main(int argc, char** argv) { return lsle::cli::main(argc, argv, std::cout, std::cerr); }
