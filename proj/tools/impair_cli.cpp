#include <string>
#include <vector>

#include "impair/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return impair::run_cli(args);
}
