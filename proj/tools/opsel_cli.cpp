#include "opsel/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return opsel::cli::main(argc, argv, std::cout, std::cerr);
}
