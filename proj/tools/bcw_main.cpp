#include <iostream>
#include <string>
#include <vector>

#include "bcw/cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return bcw::cli::dispatch(args, std::cout, std::cerr);
}
