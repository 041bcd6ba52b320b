#include <iostream>
#include <string>
#include <vector>

#include "dampflow/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dampflow::cli::run(args, std::cout, std::cerr);
}
