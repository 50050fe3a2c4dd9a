#include <iostream>
#include <string>
#include <vector>

#include "rlnclab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rlnclab::cli::run(args, std::cout, std::cerr);
}
