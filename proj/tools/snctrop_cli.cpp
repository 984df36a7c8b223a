#include "snctrop/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return snctrop::cli::run(argc, argv, std::cout, std::cerr); }
