#include <iostream>

#include "webflat_cli/app.hpp"

int main(int argc, char** argv) { return webflat::cli::run(argc, argv, std::cout, std::cerr); }
