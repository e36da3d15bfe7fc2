#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace krein {

/// Outcome of a verifier: overall status, named numeric quantities and
/// free-form notes. Serialized with schema_version "1".
struct Report {
  std::string name;
  bool pass = true;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;

  explicit Report(std::string n = {}) : name(std::move(n)) {}

  void add(const std::string& key, double value) { metrics.emplace_back(key, value); }
  /// Record a check; a false condition fails the report and keeps `what`.
  bool require(bool condition, const std::string& what);
  void note(std::string text) { notes.push_back(std::move(text)); }
  /// Fold another report in, prefixing its metric names.
  void absorb(const Report& other, const std::string& prefix);

  double get(const std::string& key) const;  // throws std::out_of_range
  nlohmann::json to_json() const;
};

}  // namespace krein
