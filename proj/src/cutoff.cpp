#include "quadsym/cutoff.hpp"

#include "quadsym/types.hpp"

#include <cmath>

namespace quadsym {

namespace {

// s(t) = exp(-1/t) for t > 0 and its derivative s(t)/t^2.
double s(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double ds(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

}  // namespace

CutoffKind cutoff_kind_from_string(const std::string& name) {
  if (name == "psi") return CutoffKind::psi;
  if (name == "chi") return CutoffKind::chi;
  if (name == "w" || name == "w1") return CutoffKind::w;
  if (name == "w2") return CutoffKind::w2;
  throw InputError("unknown cutoff kind '" + name + "'");
}

std::string to_string(CutoffKind kind) {
  switch (kind) {
    case CutoffKind::psi: return "psi";
    case CutoffKind::chi: return "chi";
    case CutoffKind::w: return "w";
    case CutoffKind::w2: return "w2";
  }
  return "?";
}

void CutoffSpec::validate() const {
  auto ordered = [](double a, double b) { return std::isfinite(a) && std::isfinite(b) && 0.0 <= a && a < b; };
  if (!ordered(psi_plateau, psi_support) || !ordered(chi_support_lo, chi_plateau_lo) ||
      !ordered(chi_plateau_lo, chi_plateau_hi) || !ordered(chi_plateau_hi, chi_support_hi) ||
      !ordered(w_support, w_plateau) || !ordered(w2_support, w2_plateau)) {
    throw InputError("cutoff spec: thresholds must be finite, non-negative and strictly increasing");
  }
}

CutoffValue smooth_step(double t, double a, double b) {
  if (t <= a) return {0.0, 0.0};
  if (t >= b) return {1.0, 0.0};
  const double L = b - a;
  const double u = (t - a) / L;
  const double p = s(u), r = s(1.0 - u);
  const double den = p + r;
  const double value = p / den;
  const double du = (ds(u) * r + p * ds(1.0 - u)) / (den * den);
  return {value, du / L};
}

CutoffValue cutoff(CutoffKind kind, const CutoffSpec& spec, double x) {
  const double t = std::abs(x);
  const double sgn = x < 0.0 ? -1.0 : 1.0;
  CutoffValue c;
  switch (kind) {
    case CutoffKind::psi: {
      const auto h = smooth_step(t, spec.psi_plateau, spec.psi_support);
      c = {1.0 - h.value, -h.derivative};
      break;
    }
    case CutoffKind::chi: {
      const auto up = smooth_step(t, spec.chi_support_lo, spec.chi_plateau_lo);
      const auto down = smooth_step(t, spec.chi_plateau_hi, spec.chi_support_hi);
      c = {up.value * (1.0 - down.value),
           up.derivative * (1.0 - down.value) - up.value * down.derivative};
      break;
    }
    case CutoffKind::w: c = smooth_step(t, spec.w_support, spec.w_plateau); break;
    case CutoffKind::w2: c = smooth_step(t, spec.w2_support, spec.w2_plateau); break;
  }
  c.derivative *= sgn;
  return c;
}

Dual cutoff(CutoffKind kind, const CutoffSpec& spec, const Dual& x) {
  const auto c = cutoff(kind, spec, x.v);
  return {c.value, c.derivative * x.d};
}

}  // namespace quadsym
