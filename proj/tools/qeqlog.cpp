#include <iostream>

#include "qeqlog/cli.hpp"

int main(int argc, char** argv) { return qeq::cli::run(argc, argv, std::cout, std::cerr); }
