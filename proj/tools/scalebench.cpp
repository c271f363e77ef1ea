#include <iostream>

#include "scalebench/cli/app.hpp"

int main(int argc, char** argv) { return scalebench::cli::run(argc, argv, std::cout, std::cerr); }
