#pragma once

// Complex polynomials on R^{2n} in the variables (x_1..x_n, xi_1..xi_n).

#include "quadsym/symplectic.hpp"

#include <map>
#include <string>
#include <vector>

namespace quadsym {

class Polynomial {
 public:
  using Exponent = std::vector<int>;  // length 2n

  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}

  static Polynomial constant(int n, cplx c);
  /// The coordinate Z_k, k in [0, 2n): x_{k+1} for k < n, xi_{k-n+1} otherwise.
  static Polynomial variable(int n, int k);
  static Polynomial from_quadratic(const QuadraticSymbol& q);

  int n() const { return n_; }
  const std::map<Exponent, cplx>& terms() const { return terms_; }

  /// Adds c * Z^e (terms that cancel to exactly zero are removed).
  void add_term(const Exponent& e, cplx c);
  cplx coefficient(const Exponent& e) const;

  /// Highest total degree with a non-zero coefficient, -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous(int d) const;

  cplx evaluate(const Vec& X) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(cplx c) const;

  Polynomial derivative(int k) const;

  /// Drops coefficients with |c| <= tol.
  Polynomial pruned(double tol) const;

  /// Q with Z^T Q Z equal to this homogeneous quadratic; InputError otherwise.
  QuadraticSymbol to_quadratic(double tol = 0.0) const;

  std::string str() const;

 private:
  void require_same(const Polynomial& o) const;

  int n_ = 0;
  std::map<Exponent, cplx> terms_;
};

/// a'.b' = sum_k d_k a d_k b over all 2n variables.
Polynomial gradient_dot(const Polynomial& a, const Polynomial& b);

/// {a,b} = d_xi a . d_x b - d_x a . d_xi b.
Polynomial poisson_bracket(const Polynomial& a, const Polynomial& b);

/// a(x, lambda xi).
Polynomial scale_momenta(const Polynomial& a, double lambda);

}  // namespace quadsym
