#include <iostream>
#include <string>
#include <vector>

#include "biotab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return biotab::run_cli(args, std::cout, std::cerr);
}
