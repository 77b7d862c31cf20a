#include <iostream>

#include "isoflat/cli.hpp"

int main(int argc, char** argv) { return isoflat::cli::run(argc, argv, std::cout, std::cerr); }
