#include <iostream>

#include "nmecut/cli.hpp"

int main(int argc, char** argv) { return nmecut::run_cli(argc, argv, std::cout, std::cerr); }
