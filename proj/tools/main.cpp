#include <iostream>

#include "ordertypes/cli.hpp"

int main(int argc, char** argv) { return ordertypes::cli::run(argc, argv, std::cout, std::cerr); }
