#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "pvaudit/cli.hpp"

int main(int argc, char** argv) {
  const bool color = std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO);
  std::vector<std::string> args(argv + 1, argv + argc);
  return pvaudit::run_cli(args, std::cout, std::cerr, color);
}
