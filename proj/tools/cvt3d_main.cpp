#include <iostream>

#include "cvt3d/cli.hpp"

int main(int argc, char** argv) { return cvt3d::cli::run(argc, argv, std::cout, std::cerr); }
