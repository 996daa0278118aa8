#pragma once

// Smooth cutoffs psi, chi, w, w2 built from s(t) = exp(-1/t).

#include "quadsym/dual.hpp"

#include <string>

namespace quadsym {

enum class CutoffKind { psi, chi, w, w2 };

CutoffKind cutoff_kind_from_string(const std::string& name);
std::string to_string(CutoffKind kind);

/// Plateau / support thresholds in |x|.
///   psi: 1 on |x| <= psi_plateau, 0 for |x| >= psi_support
///   chi: 1 on chi_plateau_lo <= |x| <= chi_plateau_hi, 0 outside (chi_support_lo, chi_support_hi)
///   w:   1 on |x| >= w_plateau, 0 for |x| <= w_support
///   w2:  same shape as w with its own thresholds
struct CutoffSpec {
  double psi_plateau = 1.0, psi_support = 2.0;
  double chi_support_lo = 0.5, chi_plateau_lo = 1.0, chi_plateau_hi = 2.0, chi_support_hi = 3.0;
  double w_support = 1.0, w_plateau = 2.0;
  double w2_support = 0.5, w2_plateau = 1.0;

  /// Throws InputError unless every transition interval is non-empty and ordered.
  void validate() const;
};

struct CutoffValue {
  double value = 0.0;
  double derivative = 0.0;
};

/// 0 for t <= a, 1 for t >= b, smooth monotone in between.
CutoffValue smooth_step(double t, double a, double b);

CutoffValue cutoff(CutoffKind kind, const CutoffSpec& spec, double x);

/// Chain rule through a dual argument.
Dual cutoff(CutoffKind kind, const CutoffSpec& spec, const Dual& x);

}  // namespace quadsym
