#include <iostream>

#include "mapstat/cli.hpp"

int main(int argc, char** argv) { return mapstat::cli::run(argc, argv, std::cout, std::cerr); }
