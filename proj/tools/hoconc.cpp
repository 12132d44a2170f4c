#include "hoconc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hoconc::run_cli(argc, argv, std::cout, std::cerr); }
