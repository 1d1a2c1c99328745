#include "cli.hpp"

int main(int argc, char** argv) { return motint::cli::run(argc, argv, std::cout, std::cerr); }
