#include <iostream>

#include "optframe/cli.hpp"

int main(int argc, char** argv) { return optframe::cli::run(argc, argv, std::cout, std::cerr); }
