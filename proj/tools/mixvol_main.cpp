#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
#ifdef MIXVOL_FIELDZEROS_FRONTEND
  args.insert(args.begin(), "fieldzeros");
#endif
  return mixvol::cli::run(args, std::cout, std::cerr);
}
