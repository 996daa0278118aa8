#pragma once

// Tensor Hermite functions h_alpha, |alpha| <= N, and ladder operators on them.

#include "quadsym/types.hpp"

#include <Eigen/Sparse>

#include <map>
#include <vector>

namespace quadsym {

using SpMat = Eigen::SparseMatrix<cplx>;
using MultiIndex = std::vector<int>;

/// Basis ordered by total degree, then lexicographically decreasing within a
/// degree, so the degree-<= d functions form a prefix for every d <= N.
class HermiteTruncation {
 public:
  HermiteTruncation(int n, int N);

  int n() const { return n_; }
  int N() const { return N_; }
  int size() const { return static_cast<int>(basis_.size()); }
  const std::vector<MultiIndex>& basis() const { return basis_; }
  const MultiIndex& alpha(int i) const { return basis_[i]; }
  int degree(int i) const { return degree_[i]; }

  /// Position of alpha in the basis, -1 when |alpha| > N.
  int index(const MultiIndex& alpha) const;

  /// Number of basis functions of degree <= d.
  int size_up_to(int d) const;

 private:
  int n_, N_;
  std::vector<MultiIndex> basis_;
  std::vector<int> degree_;
  std::map<MultiIndex, int> lookup_;
};

/// C(N+n, n).
long binomial_size(int n, int N);

struct LadderSet {
  std::vector<SpMat> a;     // annihilation a_k h_alpha = sqrt(alpha_k) h_{alpha - e_k}
  std::vector<SpMat> adag;  // creation, components above degree N dropped
};

LadderSet ladder_matrices(const HermiteTruncation& t);

/// x_k = (a_k + a_k^dag)/sqrt 2.
SpMat position_operator(const LadderSet& l, int k);
/// D_k = -i d/dx_k = -i (a_k - a_k^dag)/sqrt 2.
SpMat momentum_operator(const LadderSet& l, int k);

}  // namespace quadsym
