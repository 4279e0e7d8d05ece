#include <iostream>

#include "ibcsim_cli/commands.hpp"

int main(int argc, char** argv) { return ibccli::run(argc, argv, std::cout, std::cerr); }
