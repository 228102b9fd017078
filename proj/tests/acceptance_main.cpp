#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  modtheta::acceptance::Options opts;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seed" && i + 1 < argc) {
      opts.seed = std::stoull(argv[++i]);
    } else if (arg == "--fixtures" && i + 1 < argc) {
      opts.fixture_dir = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--seed N] [--fixtures DIR]\n";
      return 64;
    }
  }
  int failed = 0;
  const auto results = modtheta::acceptance::run_all(opts, [&](const auto& r) {
    std::cout << modtheta::acceptance::format_line(r) << std::endl;
    failed += r.passed ? 0 : 1;
  });
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed (seed " << opts.seed << ")\n";
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
