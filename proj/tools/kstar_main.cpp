// kstar_main.cpp
// Thin wrapper: collect argv and hand off to run_cli.

#include <iostream>
#include <string>
#include <vector>

#include "kstar/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return kstar::run_cli(args, std::cout, std::cerr);
}
