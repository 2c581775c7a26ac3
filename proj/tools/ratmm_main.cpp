#include <iostream>

#include "ratmm/cli/commands.hpp"

int main(int argc, char** argv) { return ratmm::cli::run_cli(argc, argv, std::cout, std::cerr); }
