#include <cstdlib>
#include <iostream>
#include <string_view>

#include "cdalg/acceptance.hpp"

int main(int argc, char** argv) {
  cdalg::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--reduced") options.reduced = true;
    else if (arg == "--inject-sign-fault") options.inject_sign_fault = true;
    else if (arg == "--no-selftest") options.nested_selftest = false;
    else if (arg == "--seed" && i + 1 < argc) options.seed = std::strtoull(argv[++i], nullptr, 10);
    else {
      std::cerr << "usage: acceptance [--reduced] [--inject-sign-fault] [--no-selftest] [--seed N]\n";
      return 1;
    }
  }
  const auto results = cdalg::run_acceptance(options);
  std::cout << cdalg::format_results(results);
  bool all = true;
  for (const auto& r : results) all = all && r.pass;
  return all ? 0 : 1;
}
