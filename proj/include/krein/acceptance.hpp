#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "krein/random.hpp"
#include "krein/string_core.hpp"

namespace krein {

/// Random atomic string: n atoms with exponential gaps and masses, first
/// atom at a uniform position in [-2, 2), finite right limit one further
/// exponential gap past the last atom.
StieltjesString random_test_string(CounterRng& rng, std::size_t n);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240917;
  std::vector<int> only;  // empty: all criteria
};

/// Run the acceptance criteria, printing one PASS/FAIL line per criterion to
/// `out` as each completes.
std::vector<CriterionResult> run_acceptance(std::ostream& out, const AcceptanceOptions& opt = {});

}  // namespace krein
