#include <iostream>

#include "qwdirac/cli.hpp"

int main(int argc, char** argv) { return qwd::cli::run(argc, argv, std::cout, std::cerr); }
