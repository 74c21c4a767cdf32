#include <iostream>

#include "gbpcrps/cli.hpp"

int main(int argc, char** argv) { return gbpcrps::cli::run(argc, argv, std::cout, std::cerr); }
