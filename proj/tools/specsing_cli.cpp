#include <iostream>

#include "specsing/cli.hpp"

int main(int argc, char** argv) { return specsing::cli::run(argc, argv, std::cout, std::cerr); }
