#include <iostream>

#include "icd/cli.hpp"

int main(int argc, char** argv) { return icd::cli::run(argc, argv, std::cout, std::cerr); }
