#include <iostream>

#include "pirpnn/cli.hpp"

int main(int argc, char** argv) { return pirpnn::cli::run(argc, argv, std::cout, std::cerr); }
