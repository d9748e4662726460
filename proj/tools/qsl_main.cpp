#include <vector>

#include "qsl/cli.hpp"

int main(int argc, char** argv) {
    return qsl::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
