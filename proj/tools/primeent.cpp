#include <iostream>

#include "primeent/cli.hpp"

int main(int argc, char** argv) { return primeent::cli::run(argc, argv, std::cout, std::cerr); }
