#include <iostream>

#include "advqa/cli.hpp"

int main(int argc, char** argv) { return advqa::cli::dispatch(argc, argv, std::cout, std::cerr); }
