#include <string>
#include <vector>

#include "eal/cli.hpp"

int main(int argc, char** argv) {
  return eal::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
