#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "netpower/io.hpp"

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> args(argv + 1, argv + argc);
  const netpower::RunOutcome outcome = netpower::run_cli(args);

  if (outcome.out_path.empty()) {
    std::cout << outcome.document;
  } else {
    std::ofstream out(outcome.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "netpower: cannot write '" << outcome.out_path << "'\n";
      return 1;
    }
    out << outcome.document;
  }

  const auto elapsed =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
  // Timing stays on stderr so result bytes do not depend on the wall clock.
  std::cerr << "netpower: done in " << elapsed.count() / 1000.0 << " ms\n";
  return outcome.exit_code;
}
