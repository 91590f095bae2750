#include <iostream>

#include <thetaq/cli.hpp>

int main(int argc, char **argv)
{
    return thetaq::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
