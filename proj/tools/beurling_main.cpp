#include <string>
#include <vector>

#include "beurling/cli.hpp"

int main(int argc, char** argv) {
  return beurling::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
