#include <iostream>

#include "bai/cli.hpp"

int main(int argc, char** argv) { return bai::cli::run(argc, argv, std::cout, std::cerr); }
