#include <iostream>

#include "ecfb/cli/app.hpp"

int main(int argc, char** argv) { return ecfb::cli::run_cli(argc, argv, std::cout, std::cerr); }
