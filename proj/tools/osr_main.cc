#include <iostream>
#include <string>
#include <vector>

#include "osr/cli.h"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const osr::cli::CliResult result = osr::cli::RunCli(args);
  std::cout << result.output;
  std::cerr << result.error;
  return result.exit_code;
}
