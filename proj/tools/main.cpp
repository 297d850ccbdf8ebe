#include <iostream>

#include "masscut/cli.hpp"

int main(int argc, char** argv) { return masscut::cli::run(argc, argv, std::cout, std::cerr); }
