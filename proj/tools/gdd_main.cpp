#include <iostream>

#include "gdd/cli.hpp"

int main(int argc, char** argv) { return gdd::cli::run(argc, argv, std::cout, std::cerr); }
