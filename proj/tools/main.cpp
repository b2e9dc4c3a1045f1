#include <iostream>

#include "lexdiar/cli.hpp"

int main(int argc, char** argv) { return lexdiar::cli_entry(argc, argv, std::cout, std::cerr); }
