#include "semikrylov/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return semikrylov::run_command({argv + 1, argv + argc}, std::cout, std::cerr);
}
