#include <iostream>

#include "ncca/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ncca::run(args, std::cout, std::cerr);
}
