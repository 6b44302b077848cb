#include <iostream>

#include "munj/cli.hpp"

int main(int argc, char** argv) { return munj::run_cli(argc, argv, std::cout, std::cerr); }
