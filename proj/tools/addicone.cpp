#include <vector>

#include "addicone/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return addicone::run_cli(std::move(args));
}
