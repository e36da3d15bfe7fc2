#include <fstream>
#include <set>
#include <sstream>

#include "krein/errors.hpp"
#include "krein/io.hpp"

namespace krein {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const char* what) {
  if (!j.is_object()) throw InvalidInput(std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw InvalidInput(std::string("unknown key '") + key + "' in " + what);
}

double number(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw InvalidInput(std::string("missing key '") + key + "' in " + what);
  const json& v = j.at(key);
  if (!v.is_number()) throw InvalidInput(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("malformed JSON in " + path + ": " + e.what());
  }
}

StieltjesString string_from_json(const json& j) {
  reject_unknown_keys(j, {"label", "atoms", "l"}, "string description");
  std::string label;
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw InvalidInput("label must be a string");
    label = j.at("label").get<std::string>();
  }
  if (!j.contains("atoms") || !j.at("atoms").is_array())
    throw InvalidInput("string description needs an 'atoms' array");
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    reject_unknown_keys(a, {"x", "w"}, "atom");
    atoms.push_back({number(a, "x", "atom"), number(a, "w", "atom")});
  }
  if (!j.contains("l")) throw InvalidInput("string description needs 'l'");
  double l = 0.0;
  const json& lj = j.at("l");
  if (lj.is_string()) {
    if (lj.get<std::string>() != "inf") throw InvalidInput("'l' must be a number or \"inf\"");
    l = kInf;
  } else if (lj.is_number()) {
    l = lj.get<double>();
  } else {
    throw InvalidInput("'l' must be a number or \"inf\"");
  }
  return StieltjesString(std::move(atoms), l, std::move(label));
}

json string_to_json(const StieltjesString& s) {
  json atoms = json::array();
  for (const auto& a : s.atoms()) atoms.push_back({{"x", a.x}, {"w", a.w}});
  json out;
  out["label"] = s.label();
  out["atoms"] = std::move(atoms);
  if (s.infinite_length())
    out["l"] = "inf";
  else
    out["l"] = s.right_limit();
  return out;
}

StieltjesString read_string_file(const std::string& path) {
  return string_from_json(read_json_file(path));
}

SpectralMeasure spectrum_from_json(const json& j) {
  reject_unknown_keys(j, {"atoms", "a"}, "spectrum description");
  if (!j.contains("atoms") || !j.at("atoms").is_array())
    throw InvalidInput("spectrum description needs an 'atoms' array");
  SpectralMeasure out;
  for (const auto& a : j.at("atoms")) {
    reject_unknown_keys(a, {"xi", "w"}, "spectral atom");
    SpectralAtom at{number(a, "xi", "spectral atom"), number(a, "w", "spectral atom")};
    if (!(at.xi > 0.0) || !(at.weight > 0.0))
      throw InvalidInput("spectral atoms need positive xi and weight");
    if (!out.atoms.empty() && !(out.atoms.back().xi < at.xi))
      throw InvalidInput("spectral atoms must be strictly increasing in xi");
    out.atoms.push_back(at);
  }
  out.offset = j.contains("a") ? number(j, "a", "spectrum description") : 0.0;
  return out;
}

json spectrum_to_json(const SpectralMeasure& sigma) {
  if (sigma.closed_form) throw InvalidInput("closed-form measures have no atom list");
  json atoms = json::array();
  for (const auto& a : sigma.atoms) atoms.push_back({{"xi", a.xi}, {"w", a.weight}});
  return json{{"atoms", std::move(atoms)}, {"a", sigma.offset}};
}

SpectralMeasure read_spectrum_file(const std::string& path) {
  return spectrum_from_json(read_json_file(path));
}

}  // namespace krein
