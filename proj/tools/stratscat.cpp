#include <iostream>

#include "strat/cli/run.hpp"

int main(int argc, char** argv) { return strat::cli::run_cli(argc, argv, std::cout, std::cerr); }
