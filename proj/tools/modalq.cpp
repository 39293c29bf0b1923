#include <iostream>

#include "modalq/cli.hpp"

int main(int argc, char** argv) { return modalq::cli::run(argc, argv, std::cout, std::cerr); }
