#include "krein/report.hpp"

#include <cmath>
#include <stdexcept>

namespace krein {

bool Report::require(bool condition, const std::string& what) {
  if (!condition) {
    pass = false;
    notes.push_back("failed: " + what);
  }
  return condition;
}

void Report::absorb(const Report& other, const std::string& prefix) {
  for (const auto& [k, v] : other.metrics) metrics.emplace_back(prefix + k, v);
  for (const auto& n : other.notes) notes.push_back(prefix + n);
  pass = pass && other.pass;
}

double Report::get(const std::string& key) const {
  for (const auto& [k, v] : metrics)
    if (k == key) return v;
  throw std::out_of_range("no metric " + key + " in report " + name);
}

nlohmann::json Report::to_json() const {
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [k, v] : metrics) {
    if (std::isfinite(v))
      m[k] = v;
    else
      m[k] = std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  }
  return {{"schema_version", "1"}, {"name", name}, {"pass", pass}, {"metrics", m}, {"notes", notes}};
}

}  // namespace krein
