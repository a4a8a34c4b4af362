#include "ptspec/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return ptspec::run_cli(argc, argv, std::cout, std::cerr);
}
