#pragma once

// Iterated brackets H_{Im q}^k Re q written as integer combinations of the
// bilinear forms Re q((ImF)^{l1} X; (ImF)^{l2} X).

#include "quadsym/symplectic.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

namespace quadsym {

/// Coefficients are stored on unordered pairs, key (l1, l2) with l1 <= l2. The
/// two ordered contributions of an off-diagonal pair are merged into one entry,
/// so {j, k-j} carries 2 * 2^k C(k,j) for j != k-j and 2^k C(k,k/2) on the diagonal.
class BracketExpansion {
 public:
  using Key = std::pair<int, int>;

  /// H^0 Re q = Re q, i.e. {0,0}:1.
  BracketExpansion();

  int order() const { return order_; }
  const std::map<Key, std::int64_t>& coeffs() const { return coeffs_; }
  std::int64_t coefficient(int l1, int l2) const;

  /// Sum of all coefficients (4^order).
  std::int64_t mass() const;

  /// H applied once: c on {l1,l2} adds 2c to {l1+1,l2} and 2c to {l1,l2+1}.
  BracketExpansion apply_H() const;

  /// H^k Re q, k <= 30.
  static BracketExpansion power(int k);

 private:
  int order_ = 0;
  std::map<Key, std::int64_t> coeffs_;
};

/// sum c * Re q((ImF)^{l1} X; (ImF)^{l2} X).
double evaluate(const BracketExpansion& e, const QuadraticSymbol& q, const Vec& X);

/// Real symmetric matrix M with X^T M X = evaluate(e, q, X).
Mat bracket_form_matrix(const BracketExpansion& e, const QuadraticSymbol& q);

/// Vanishing threshold for H^j Re q at X: 1e-9 * ||Re Q|| * sum |c_ab| |ImF^a X| |ImF^b X|,
/// the rounding scale of the expansion. Homogeneous of degree j+1 in q and 2 in X.
double bracket_tolerance(const QuadraticSymbol& q, const Vec& X, int j);

/// Smallest k with H^{2k} Re q(X) > tol and H^j Re q(X) within tol for j < 2k.
/// Empty when no such k <= kmax exists (or an odd order is the first to appear).
/// kmax defaults to 2(2n-1).
std::optional<int> finite_type_order(const QuadraticSymbol& q, const Vec& X, int kmax = -1);

/// Max of finite_type_order over seeded samples; empty if any sample has none.
///
/// Uniform sphere samples alone almost surely see order 0 wherever Re q is not
/// identically zero on an open set, so the samples alternate between the full
/// sphere and the unit spheres of the nested strata
/// Z_1 = {Re q = 0}, Z_{k+1} = {X in Z_k : H^{2k} Re q(X) = 0},
/// obtained from the bracket form matrices (each form is non-negative on its stratum).
std::optional<int> k0_dynamic(const QuadraticSymbol& q, int sample_count, std::uint64_t seed);

}  // namespace quadsym
