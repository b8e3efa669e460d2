#include <iostream>

#include "aivf/commands.hpp"

int main(int argc, char** argv) { return aivf::run_cli(argc, argv, std::cout, std::cerr); }
