#include <iostream>

#include "rpqshap/cli.hpp"

int main(int argc, char** argv) {
    return rpqshap::cli::run(argc, argv, std::cout, std::cerr);
}
