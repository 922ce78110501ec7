#include <iostream>

#include "iwasawa/cli/app.hpp"

int main(int argc, char** argv) { return iwasawa::cli::run(argc, argv, std::cout, std::cerr); }
