#include "kobayashi/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return kobayashi::run_cli(argc, argv, std::cout, std::cerr); }
