#include <string>
#include <vector>

#include "capnet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return capnet::cli::run(args);
}
