#include <iostream>

#include "bapa/cli.hpp"

int main(int argc, char** argv) { return bapa::run_cli(argc, argv, std::cout, std::cerr); }
