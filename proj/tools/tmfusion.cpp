#include <iostream>
#include <string>
#include <vector>

#include "tmfusion/cli.hpp"

int main(int argc, char** argv) {
    return tmfusion::cli::dispatch(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
