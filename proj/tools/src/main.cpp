#include <iostream>

#include "blogext/cli.hpp"

int main(int argc, char** argv)
{
    return blogext::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
