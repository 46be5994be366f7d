#include <string>
#include <vector>

#include "renewal/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return renewal::cli_main(args);
}
