#include <iostream>

#include "conesynth/cli.hpp"

int main(int argc, char** argv) { return conesynth::cli::run(argc, argv, std::cout, std::cerr); }
