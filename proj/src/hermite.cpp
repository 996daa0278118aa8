#include "quadsym/hermite.hpp"

#include <cmath>

namespace quadsym {

namespace {

// All alpha in N^n with |alpha| = d, lexicographically decreasing.
void compositions(int n, int d, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur[pos] = k;
    compositions(n, d - k, cur, pos + 1, out);
  }
}

}  // namespace

long binomial_size(int n, int N) {
  long r = 1;
  for (int k = 1; k <= n; ++k) r = r * (N + k) / k;
  return r;
}

HermiteTruncation::HermiteTruncation(int n, int N) : n_(n), N_(N) {
  if (n < 1) throw InputError("HermiteTruncation: n must be >= 1");
  if (N < 0) throw InputError("HermiteTruncation: N must be >= 0");
  MultiIndex cur(n, 0);
  for (int d = 0; d <= N; ++d) {
    const std::size_t before = basis_.size();
    compositions(n, d, cur, 0, basis_);
    degree_.insert(degree_.end(), basis_.size() - before, d);
  }
  for (int i = 0; i < size(); ++i) lookup_.emplace(basis_[i], i);
}

int HermiteTruncation::index(const MultiIndex& alpha) const {
  auto it = lookup_.find(alpha);
  return it == lookup_.end() ? -1 : it->second;
}

int HermiteTruncation::size_up_to(int d) const {
  if (d < 0) return 0;
  if (d >= N_) return size();
  return static_cast<int>(binomial_size(n_, d));
}

LadderSet ladder_matrices(const HermiteTruncation& t) {
  if (t.N() < 1) throw InputError("ladder_matrices: N must be >= 1");
  using Trip = Eigen::Triplet<cplx>;
  LadderSet l;
  const int dim = t.size();
  for (int k = 0; k < t.n(); ++k) {
    std::vector<Trip> down, up;
    for (int i = 0; i < dim; ++i) {
      MultiIndex alpha = t.alpha(i);
      if (alpha[k] > 0) {
        MultiIndex beta = alpha;
        --beta[k];
        down.emplace_back(t.index(beta), i, std::sqrt(static_cast<double>(alpha[k])));
      }
      MultiIndex gamma = alpha;
      ++gamma[k];
      const int j = t.index(gamma);
      if (j >= 0) up.emplace_back(j, i, std::sqrt(static_cast<double>(gamma[k])));
    }
    SpMat a(dim, dim), ad(dim, dim);
    a.setFromTriplets(down.begin(), down.end());
    ad.setFromTriplets(up.begin(), up.end());
    l.a.push_back(std::move(a));
    l.adag.push_back(std::move(ad));
  }
  return l;
}

SpMat position_operator(const LadderSet& l, int k) {
  return SpMat((l.a[k] + l.adag[k]) * cplx(1.0 / std::sqrt(2.0)));
}

SpMat momentum_operator(const LadderSet& l, int k) {
  return SpMat((l.a[k] - l.adag[k]) * cplx(0.0, -1.0 / std::sqrt(2.0)));
}

}  // namespace quadsym
