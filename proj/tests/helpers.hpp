#pragma once

#include <cmath>
#include <vector>

#include "krein/acceptance.hpp"
#include "krein/random.hpp"
#include "krein/string_core.hpp"

namespace testing {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// n random strings with 1..max_atoms atoms, finite l.
inline std::vector<krein::StieltjesString> corpus(std::size_t n, std::size_t max_atoms, std::uint64_t stream) {
  krein::CounterRng rng(7, stream);
  std::vector<krein::StieltjesString> out;
  for (std::size_t k = 0; k < n; ++k) {
    const auto size = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_atoms));
    out.push_back(krein::random_test_string(rng, std::min(size, max_atoms)));
  }
  return out;
}

inline const krein::StieltjesString& single_atom() {
  static const krein::StieltjesString s({{0.0, 2.0}}, 1.0, "single");
  return s;
}

}  // namespace testing
