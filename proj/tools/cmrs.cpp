#include <iostream>

#include "cmrs/cli.hpp"

int main(int argc, char** argv) { return cmrs::run_cli(argc, argv, std::cout, std::cerr); }
