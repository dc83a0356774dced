#include <string>
#include <vector>

#include "fwn/cli.hpp"

int main(int argc, char** argv) {
    return fwn::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
