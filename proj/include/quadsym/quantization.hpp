#pragma once

// Weyl quantization of polynomial symbols on truncated Hermite spaces, the
// spectral weights (1 + oscillator)^s, subelliptic pencil constants and heat decay.

#include "quadsym/hermite.hpp"
#include "quadsym/polynomial.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace quadsym {

/// "standard": xi acts as D = -i d/dx. "lerner": xi acts as D/(2 pi).
enum class Convention { standard, lerner };

std::string to_string(Convention c);

/// Matrix of a polynomial operator from the degree-<= N_in Hermite space into
/// the degree-<= N_out space, N_out = N_in + symbol degree. No component is lost.
struct TruncatedOperator {
  SpMat matrix;
  int n = 0;
  int N_in = 0;
  int N_out = 0;
  Convention convention = Convention::standard;
  bool exact = true;  // false when the symbol degree exceeds 2

  /// Rows restricted to the input space (square compression).
  SpMat square() const;
};

/// Weyl quantization: each monomial becomes the average of all distinct
/// orderings of its factors x_k and xi_k -> D_k (D_k / 2 pi in the lerner convention).
TruncatedOperator weyl_matrix(const Polynomial& a, int N, Convention convention = Convention::standard);
TruncatedOperator weyl_matrix(const QuadraticSymbol& q, int N);

/// Diagonal (1 + 2|alpha| + n)^s on the degree-<= N space, s in (0, 1].
Vec weight_matrix(double s, int n, int N);

enum class WeightSide { primed, unprimed };

/// Diagonal (1 + 2|alpha'| + n')^s where alpha' lists the first n_primed
/// components (or the remaining ones for WeightSide::unprimed).
Vec partial_weight_matrix(double s, int n, int n_primed, int N, WeightSide side);

/// max_u |W u|^2 / (|M u|^2 + |u|^2) over the degree-<= N space; M rectangular.
/// The pencil is split into the connected components of the sparsity graph of
/// M*M before the dense Hermitian eigen-solves.
double pencil_constant(const TruncatedOperator& M, const Vec& weight);

/// C'(N) for |Lambda^{2s} u|^2 <= C'(|q^w u|^2 + |u|^2), Lambda^{2s} = weight_matrix(s).
double subelliptic_constant(const QuadraticSymbol& q, double s, int N);

/// Throws PreconditionError unless q = q1(x', xi') + i q2(x'', xi'') with the
/// primed variables first, q2 real, no coupling between the two groups.
void require_block_form(const QuadraticSymbol& q, int n_primed, double tol_rel = 1e-12);

double directional_subelliptic_constant(const QuadraticSymbol& q_block, int n_primed, double s, int N,
                                        WeightSide side = WeightSide::primed);

struct HeatDecayReport {
  double t = 0.0;
  int N = 0;
  std::uint64_t seed = 0;
  int cut_degree = 0;              // mass is "high" above this degree (N/2)
  double total_mass = 0.0;
  double high_degree_mass = 0.0;
  double high_degree_fraction = 0.0;
  std::vector<double> by_degree;    // total Hermite degree
  std::vector<double> by_primed;    // |alpha'|
  std::vector<double> by_unprimed;  // |alpha''|
};

/// exp(-t S) u0 by scaled Taylor steps on the sparse matrix; S accretive.
CVec apply_semigroup(const SpMat& S, double t, const CVec& u0);

/// exp(-t q^w) on the square compression applied to a seeded random unit vector.
HeatDecayReport heat_decay(const QuadraticSymbol& q, double t, int N, std::uint64_t seed, int n_primed = -1);

}  // namespace quadsym
