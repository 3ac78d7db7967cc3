#include "threeform/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return threeform::cli::run(argc, argv, std::cout, std::cerr); }
