#include <iostream>

#include "lsz/cli/commands.hpp"

int main(int argc, char** argv) { return lsz::cli::run(argc, argv, std::cout, std::cerr); }
