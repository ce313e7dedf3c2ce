#include <cstdio>

#include "classprod/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  classprod::CliResult r = classprod::run_cli(args);
  std::fputs(r.output.c_str(), r.exit_code == 0 ? stdout : stderr);
  return r.exit_code;
}
