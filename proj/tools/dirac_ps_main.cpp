#include <iostream>

#include "dirac_ps/cli.hpp"

int main(int argc, char** argv) { return dirac_ps::cli::main_entry(argc, argv, std::cout, std::cerr); }
