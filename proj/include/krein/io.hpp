#pragma once

#include <json.hpp>
#include <string>

#include "krein/spectral.hpp"
#include "krein/string_core.hpp"

namespace krein {

// String files: {"label": str, "atoms": [{"x": num, "w": num}, ...], "l": num | "inf"}
// Spectrum files: {"atoms": [{"xi": num, "w": num}, ...], "a": num}
// Unknown keys, unsorted positions, non-positive weights and atoms at or
// right of l are rejected with InvalidInput.

StieltjesString string_from_json(const nlohmann::json& j);
nlohmann::json string_to_json(const StieltjesString& s);
StieltjesString read_string_file(const std::string& path);

SpectralMeasure spectrum_from_json(const nlohmann::json& j);
nlohmann::json spectrum_to_json(const SpectralMeasure& sigma);
SpectralMeasure read_spectrum_file(const std::string& path);

nlohmann::json read_json_file(const std::string& path);

}  // namespace krein
