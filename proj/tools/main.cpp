#include <string>
#include <vector>

#include "wqed/cli.hpp"

int main(int argc, char** argv) {
  return wqed::run_cli(std::vector<std::string>(argv, argv + argc));
}
