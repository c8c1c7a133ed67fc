#include <iostream>
#include <string>
#include <vector>

#include "cumret/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return cumret::cli::run(args, std::cout, std::cerr);
}
