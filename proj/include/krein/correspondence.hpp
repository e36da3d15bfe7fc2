#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "krein/report.hpp"
#include "krein/scale.hpp"
#include "krein/spectral.hpp"
#include "krein/string_core.hpp"

namespace krein {

struct StringSequence {
  std::vector<StieltjesString> items;
  std::optional<StieltjesString> limit;
};

struct SpectrumSequence {
  std::vector<SpectralMeasure> items;
  std::optional<SpectralMeasure> limit;
};

/// Condition ids: "A", "B", "C", "D" on strings; "A'", "C'", "D'", "A''",
/// "C''", "D''" on spectra.
bool is_string_condition(const std::string& id);
bool is_spectrum_condition(const std::string& id);

struct ConditionResult {
  bool pass = false;
  double margin = 0.0;
  std::string witness;
};

struct ConvergenceReport {
  std::map<std::string, ConditionResult> conditions;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

/// Parameter ladders for the finite surrogates. Empty vectors take defaults:
/// x ladder -2^j (j = 0..12), N ladder 2^j (j = 0..20), eps ladder 2^-j
/// (j = 0..20), t grid 2^j (j = -4..4), lambda grid {-0.5, -1, -4}.
struct ConvergenceOptions {
  double tol = 1e-3;
  std::optional<ScaleFunction> phi;
  std::vector<double> grid;        // points for (A); default comparison grid
  std::vector<double> xi_grid;     // points for (A'); default geometric over the atoms
  std::vector<double> x_ladder;    // x -> -inf for (B), (C)
  std::vector<double> N_ladder;    // N -> inf for (C')
  std::vector<double> eps_ladder;  // eps -> 0 for (C'')
  std::vector<double> t_grid;      // (A'')
  std::vector<double> lambda_grid; // (D'), (D'')
  std::vector<double> D_points;    // x for (D); default: points left of every l
};

/// Limit of a sequence from its last three terms by Aitken's delta-squared
/// process; +inf (or -inf) when the terms do not contract.
double extrapolate_limit(const std::vector<double>& terms);

/// Evaluate the requested conditions. Limits along ladders are extrapolated
/// from the last three ladder values; suprema over n are extrapolated from
/// prefix suprema. Without a limit, (A)/(A')/(A'') use the Cauchy surrogate
/// max |item_{n+1} - item_n|. Throws InsufficientData below three items.
ConvergenceReport check_conditions(const StringSequence& seq, const std::vector<std::string>& which,
                                   const ConvergenceOptions& opt = {});
ConvergenceReport check_conditions(const SpectrumSequence& seq, const std::vector<std::string>& which,
                                   const ConvergenceOptions& opt = {});

/// Green functions and spectral functions of a converging string sequence.
/// Reports per-item deviations from the limit (or from the next item when no
/// limit is supplied), the smallest ratio between consecutive deviations,
/// and the Lemma l3 check liminf l_n >= l.
struct ForwardOptions {
  std::vector<double> lambdas{-1.0, -10.0};
  std::vector<double> points;    // x, y points for the Green function
  std::vector<double> xi_grid;   // points for sigma_n(xi)
  std::optional<double> boundary;  // Dirichlet point when l is infinite
  double min_ratio = 1.8;
};
Report forward_continuity_harness(const StringSequence& seq, const ForwardOptions& opt);

/// Rebuild strings from a spectrum sequence, normalize each to M(0) = c and
/// compare with the normalized limit string in the compactified metric.
/// When M_n(l_n) shrinks to 0 the report switches to the degenerate check
/// sigma_n(xi) -> 0 instead.
struct InverseOptions {
  std::optional<double> c;       // default: half of min_n M_n(l_n)
  double tol = 1e-6;
  std::vector<double> t_grid{0.1, 1.0, 10.0};
  std::vector<double> xi_grid;   // degenerate check
  std::optional<ScaleFunction> phi;
};
Report inverse_continuity_harness(const SpectrumSequence& seq, const InverseOptions& opt);

/// Finiteness of E_phi and S_phi must agree.
Report phi_space_equivalence_check(const StieltjesString& s, const ScaleFunction& phi);
Report phi_space_equivalence_check_alpha(double alpha, const ScaleFunction& phi);

}  // namespace krein
