#include <iostream>

#include "lpfix/cli.hpp"

int main(int argc, char** argv) { return lpfix::cli::run(argc, argv, std::cout, std::cerr); }
