#pragma once

// Singular space S = cap_j Ker[Re F (Im F)^j] of a quadratic symbol, the
// index k0, the averaged positive form and the symplectic splitting
// q = q1(x', xi') + i q2(x'', xi'').

#include "quadsym/symplectic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace quadsym {

/// Orthonormal basis (columns) of the right singular vectors of M with
/// singular value <= tol_rel * sigma_max(M). The whole space when M = 0.
Mat kernel(const Mat& M, double tol_rel = 1e-10);

enum class SymplecticFlag { yes, no, indeterminate };

std::string to_string(SymplecticFlag flag);

struct Rational {
  long num = 0;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct SingularSpaceReport {
  Mat basis_S;                   // 2n x dim_S, orthonormal columns
  int dim_S = 0;
  std::vector<int> kernel_dims;  // dim of cap_{j<=k} Ker, k = 0..2n-1
  std::optional<int> k0;
  SymplecticFlag S_symplectic = SymplecticFlag::yes;
  double gram_condition = 1.0;   // condition number of the sigma Gram matrix on basis_S
  std::optional<Rational> exponent;
  double tol_rel = 1e-10;
};

SingularSpaceReport singular_space(const QuadraticSymbol& q, double tol_rel = 1e-10);

/// R = sum_{j<=k0} (ImF^T)^j Re Q (ImF)^j, i.e. X^T R X = sum_j Re q((ImF)^j X).
Mat averaged_form_matrix(const QuadraticSymbol& q, int k0);

/// Partial ellipticity on S: min over unit X in S of |q(X)| exceeds tol.
bool check_partial_ellipticity(const QuadraticSymbol& q, const SingularSpaceReport& report,
                               double tol_rel = 1e-9);

/// Smallest |q(X)| over unit X in span(basis).
double min_modulus_on_sphere(const QuadraticSymbol& q, const Mat& basis);

struct SymplecticSplit {
  Mat basis_perp;  // 2n x 2n', columns (x'_1..x'_n', xi'_1..xi'_n')
  Mat basis_S;     // 2n x 2n'', columns (x''_1..x''_n'', xi''_1..xi''_n'')
  CMat Q1;         // q1 on S^{sigma perp}, complex symmetric 2n' x 2n'
  Mat Q2;          // q2 on S, real symmetric 2n'' x 2n''
  double q2_real_residual = 0.0;  // max |Re q| on S relative to ||Q||, should vanish

  int n_primed() const { return static_cast<int>(basis_perp.cols() / 2); }
  int n_singular() const { return static_cast<int>(basis_S.cols() / 2); }

  /// Full symplectic matrix P whose columns list (x', x'', xi', xi'') in canonical order,
  /// so that P^T J P = J and q(P Y) is block presented with the primed variables first.
  Mat canonical_basis() const;
};

/// Symplectic Gram-Schmidt with pivoting on max |sigma(u,v)|. The returned
/// columns (e_1..e_m, f_1..f_m) satisfy sigma(f_i, e_j) = delta_ij and
/// sigma(e_i,e_j) = sigma(f_i,f_j) = 0, matching the canonical basis.
Mat symplectic_basis(const Mat& span, double pivot_tol = 1e-10);

SymplecticSplit symplectic_split(const QuadraticSymbol& q, const SingularSpaceReport& report);

/// |q(X) - q1(X') - i q2(X'')| for X = P' X' + P'' X''.
double split_residual(const QuadraticSymbol& q, const SymplecticSplit& split, const Vec& X);

/// The symbol q(P Y) in canonical block coordinates (primed variables first).
QuadraticSymbol block_presentation(const QuadraticSymbol& q, const SymplecticSplit& split);

Rational predicted_exponent(const SingularSpaceReport& report);
Rational predicted_exponent(int k0);

}  // namespace quadsym
