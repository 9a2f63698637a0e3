// Runs the numbered acceptance criteria and prints one line per criterion.
// `--only N` restricts the run to a single criterion.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "boxspin/verify/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids = boxspin::verify::criterion_ids();
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      ids = {std::atoi(argv[++i])};
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }
  const auto results = boxspin::verify::run_acceptance(ids, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
