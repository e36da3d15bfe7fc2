#include <cstdlib>
#include <iostream>
#include <string>

#include "krein/acceptance.hpp"

int main(int argc, char** argv) {
  krein::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::stoi(argv[i]));
  const auto results = krein::run_acceptance(std::cout, opt);
  int failed = 0;
  double total = 0.0;
  for (const auto& r : results) {
    failed += r.pass ? 0 : 1;
    total += r.seconds;
  }
  std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
            << " criteria passed in " << total << " s" << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
