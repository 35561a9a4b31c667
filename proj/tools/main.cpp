#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return arithreg::cli::run(argc, argv, std::cout, std::cerr); }
