#include "krein/lemmas.hpp"

#include <algorithm>
#include <cmath>

#include "krein/errors.hpp"
#include "krein/propagation.hpp"
#include "krein/quadrature.hpp"

namespace krein {

namespace {

// One affine piece of phi_lambda and M: phi = v0 + d0 (x - x0), M = M0 + W (x - x0).
struct Piece {
  double x0, x1, v0, d0, M0, W;
  double phi(double x) const { return v0 + d0 * (x - x0); }
  double M(double x) const { return M0 + W * (x - x0); }
};

// Pieces covering [l_-, hi], also split at `cut` when it falls inside.
std::vector<Piece> pieces(const StieltjesString& s, double lambda, double hi, double cut = kInf) {
  const auto states = phi_at_atoms(s, lambda);
  const auto& atoms = s.atoms();
  std::vector<Piece> out;
  for (std::size_t i = 0; i < atoms.size() && atoms[i].x < hi; ++i) {
    const double x0 = atoms[i].x;
    const double x1 = i + 1 < atoms.size() ? std::min(atoms[i + 1].x, hi) : hi;
    Piece p{x0, x1, states[i].value, states[i].right_derivative, mass_integral_M(s, x0),
            s.cumulative_mass(i + 1)};
    if (cut > x0 && cut < x1) {
      Piece q = p;
      p.x1 = cut;
      q.x0 = cut;
      q.v0 = p.phi(cut);
      q.M0 = p.M(cut);
      out.push_back(p);
      out.push_back(q);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

double rel_margin(double big, double small) {
  const double scale = std::max({std::abs(big), std::abs(small), 1e-300});
  return (big - small) / scale;
}

}  // namespace

Report verify_lemma_l2(const StieltjesString& s, double a, double lambda, double tol) {
  if (!(lambda < 0.0)) throw DomainError("lemma l2 needs lambda < 0");
  Report r("lemma_l2");
  const auto mu = dirichlet_eigenvalues(s, a);
  double T = 0.0;
  for (double m : mu) T += 1.0 / (m - lambda);

  // Same trace through the Green kernel on the diagonal.
  double T_green = 0.0;
  const auto states = phi_at_atoms(s, lambda);
  for (std::size_t i = 0; i < states.size() && states[i].x < a; ++i) {
    const double v = states[i].value;
    T_green += s.atoms()[i].w * v * v * inverse_square_integral(s, lambda, states[i].x, a);
  }

  const double Ma = mass_integral_M(s, a);
  const double pa = phi(s, lambda, a).value;
  const double lower = Ma / (pa * pa);
  const double upper = std::min(Ma, std::log(pa) / (-lambda));
  r.add("T", T);
  r.add("T_green", T_green);
  r.add("lower", lower);
  r.add("upper", upper);
  r.add("margin_lower", rel_margin(T, lower));
  r.add("margin_upper", rel_margin(upper, T));
  r.add("trace_defect", std::abs(T - T_green) / T);
  r.require(r.get("margin_lower") >= -tol, "M(a) phi(a)^-2 <= T");
  r.require(r.get("margin_upper") >= -tol, "T <= min(M(a), log phi(a) / -lambda)");
  return r;
}

Report verify_lemma_l11(const StieltjesString& s, const SpectralMeasure& sigma, const ScaleFunction& phi_s,
                        double lambda, double a, double c_phi_value, double tol) {
  if (!(lambda < 0.0)) throw DomainError("lemma l11 needs lambda < 0");
  if (sigma.is_closed_form()) throw DomainError("lemma l11 needs an atomic spectral measure");
  const double L = std::min(s.right_limit(), sigma.boundary);
  if (!std::isfinite(L)) throw TruncationRequired("lemma l11 needs a finite right end");
  if (!(a > s.left_support() && a < L)) throw DomainError("lemma l11 needs l_- < a < l");
  const double Cphi = c_phi_value > 0.0 ? c_phi_value : c_phi(phi_s);

  Report r("lemma_l11");
  double lhs = 0.0;
  for (const auto& at : sigma.atoms) lhs += at.weight * phi_tilde(phi_s, at.xi - lambda);

  // Y_n ~ Gamma(2) (the law behind C_phi) gives E Z = 2 T, so phi is applied
  // to twice the trace bound; the unscaled form is reported for comparison.
  double r1 = 0.0, r2a = 0.0, r2_literal = 0.0, r2b_int = 0.0;
  for (const auto& p : pieces(s, lambda, L, a)) {
    r1 += integrate(
        [&](double x) {
          const double q = 1.0 / (p.phi(x) * p.phi(x));
          return phi_s(p.M(x) * q) * q;
        },
        p.x0, p.x1, 1e-12);
    r2a += integrate(
        [&](double x) {
          const double v = p.phi(x);
          return phi_s(2.0 * std::min(p.M(x), std::log(v) / (-lambda))) / (v * v);
        },
        p.x0, p.x1, 1e-12);
    r2_literal += integrate(
        [&](double x) {
          const double v = p.phi(x);
          return phi_s(std::min(p.M(x), std::log(v) / (-lambda))) / (v * v);
        },
        p.x0, p.x1, 1e-12);
    if (p.x1 <= a)
      r2b_int += integrate([&](double x) { return phi_s(2.0 * p.M(x)) / (p.phi(x) * p.phi(x)); }, p.x0, p.x1, 1e-12);
  }
  r2a *= Cphi;
  r2_literal *= Cphi;
  const double dphi_a = phi(s, lambda, a).right_derivative;
  // int_0^inf phi(2t) e^{lambda t} dt = phi~(-lambda / 2) / 2
  const double r2b = Cphi * r2b_int + Cphi * (-lambda) / (2.0 * dphi_a) * phi_tilde(phi_s, -lambda / 2.0);

  r.add("C_phi", Cphi);
  r.add("lhs", lhs);
  r.add("lower", r1);
  r.add("upper_min", r2a);
  r.add("upper_split", r2b);
  r.add("upper_min_unscaled", r2_literal);
  r.add("margin_lower", rel_margin(lhs, r1));
  r.add("margin_upper", rel_margin(r2a, lhs));
  r.add("margin_split", rel_margin(r2b, r2a));
  r.require(r.get("margin_lower") >= -tol, "lower estimate");
  r.require(r.get("margin_upper") >= -tol, "upper estimate");
  r.require(r.get("margin_split") >= -tol, "split upper estimate");
  return r;
}

Report verify_lemma_l9(const std::vector<double>& weights, const ScaleFunction& phi_s, const McParams& mc,
                       double c_phi_value) {
  if (weights.empty()) throw InvalidInput("lemma l9 needs at least one weight");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("lemma l9 weights must be nonnegative");
  const double Cphi = c_phi_value > 0.0 ? c_phi_value : c_phi(phi_s);
  double EX = 0.0;
  for (double w : weights) EX += 2.0 * w;
  const auto st = mc_expectation(weights, [&](double x) { return phi_s(x); }, mc, 9);
  const double se = st.standard_error();
  const double phiEX = phi_s(EX);

  Report r("lemma_l9");
  r.add("E_X", EX);
  r.add("phi_E_X", phiEX);
  r.add("E_phi_X", st.mean);
  r.add("standard_error", se);
  r.add("C_phi", Cphi);
  r.add("margin_jensen", st.mean - phiEX + 3.0 * se);
  r.add("margin_upper", Cphi * phiEX - st.mean + 3.0 * se);
  r.require(r.get("margin_jensen") >= 0.0, "phi(EX) <= E phi(X) within 3 SE");
  r.require(r.get("margin_upper") >= 0.0, "E phi(X) <= C_phi phi(EX) within 3 SE");
  return r;
}

}  // namespace krein
