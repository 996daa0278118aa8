#include "quadsym/quantization.hpp"

#include "quadsym/sampling.hpp"


#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace quadsym {

namespace {

// Coordinate operators Z_0..Z_{2n-1} = x_1..x_n, D_1..D_n on a truncation.
std::vector<SpMat> coordinate_operators(const HermiteTruncation& t) {
  const LadderSet l = ladder_matrices(t);
  std::vector<SpMat> z;
  for (int k = 0; k < t.n(); ++k) z.push_back(position_operator(l, k));
  for (int k = 0; k < t.n(); ++k) z.push_back(momentum_operator(l, k));
  return z;
}

// Embedding of the degree-<= N space into a larger truncation.
SpMat embedding(int rows, int cols) {
  SpMat E(rows, cols);
  std::vector<Eigen::Triplet<cplx>> trips;
  for (int i = 0; i < cols; ++i) trips.emplace_back(i, i, 1.0);
  E.setFromTriplets(trips.begin(), trips.end());
  return E;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::string to_string(Convention c) { return c == Convention::standard ? "standard" : "lerner"; }

SpMat TruncatedOperator::square() const {
  const int rows = static_cast<int>(binomial_size(n, N_in));
  return SpMat(matrix.topRows(rows));
}

TruncatedOperator weyl_matrix(const Polynomial& a, int N, Convention convention) {
  if (N < 0) throw InputError("weyl_matrix: N must be >= 0");
  const int n = a.n();
  if (n < 1) throw InputError("weyl_matrix: symbol has no variables");
  const Polynomial sym =
      convention == Convention::lerner ? scale_momenta(a, 1.0 / (2.0 * std::numbers::pi)) : a;
  const int d = std::max(sym.degree(), 0);

  TruncatedOperator op;
  op.n = n;
  op.N_in = N;
  op.N_out = N + d;
  op.convention = convention;
  op.exact = d <= 2;

  const HermiteTruncation big(n, std::max(N + d, 1));
  const std::vector<SpMat> Z = coordinate_operators(big);
  const int rows = static_cast<int>(binomial_size(n, N + d));
  const int cols = static_cast<int>(binomial_size(n, N));
  const SpMat E = embedding(big.size(), cols);

  SpMat acc(big.size(), cols);
  for (const auto& [e, c] : sym.terms()) {
    std::vector<int> factors;
    for (int k = 0; k < 2 * n; ++k) factors.insert(factors.end(), e[k], k);
    // Average over the distinct orderings of the factors.
    SpMat term(big.size(), cols);
    long count = 0;
    std::sort(factors.begin(), factors.end());
    do {
      SpMat w = E;
      for (auto it = factors.rbegin(); it != factors.rend(); ++it) w = Z[*it] * w;
      term += w;
      ++count;
    } while (std::next_permutation(factors.begin(), factors.end()));
    acc += term * (c / static_cast<double>(count));
  }
  acc.prune(cplx(0.0));
  op.matrix = acc.topRows(rows);
  return op;
}

TruncatedOperator weyl_matrix(const QuadraticSymbol& q, int N) {
  return weyl_matrix(Polynomial::from_quadratic(q), N, Convention::standard);
}

Vec weight_matrix(double s, int n, int N) {
  if (!(s > 0.0) || s > 1.0) throw InputError("weight_matrix: s must lie in (0, 1]");
  const HermiteTruncation t(n, N);
  Vec w(t.size());
  for (int i = 0; i < t.size(); ++i) w(i) = std::pow(1.0 + 2.0 * t.degree(i) + n, s);
  return w;
}

Vec partial_weight_matrix(double s, int n, int n_primed, int N, WeightSide side) {
  if (!(s > 0.0) || s > 1.0) throw InputError("partial_weight_matrix: s must lie in (0, 1]");
  if (n_primed < 0 || n_primed > n) throw InputError("partial_weight_matrix: bad n_primed");
  const HermiteTruncation t(n, N);
  const int lo = side == WeightSide::primed ? 0 : n_primed;
  const int hi = side == WeightSide::primed ? n_primed : n;
  Vec w(t.size());
  for (int i = 0; i < t.size(); ++i) {
    int deg = 0;
    for (int k = lo; k < hi; ++k) deg += t.alpha(i)[k];
    w(i) = std::pow(1.0 + 2.0 * deg + (hi - lo), s);
  }
  return w;
}

double pencil_constant(const TruncatedOperator& M, const Vec& weight) {
  const int dim = static_cast<int>(M.matrix.cols());
  if (weight.size() != dim) throw InputError("pencil_constant: weight size mismatch");
  const SpMat G = SpMat(M.matrix.adjoint() * M.matrix);

  UnionFind uf(dim);
  for (int k = 0; k < G.outerSize(); ++k) {
    for (SpMat::InnerIterator it(G, k); it; ++it) {
      if (it.value() != cplx(0.0)) uf.unite(static_cast<int>(it.row()), static_cast<int>(it.col()));
    }
  }
  std::vector<std::vector<int>> comps(dim);
  for (int i = 0; i < dim; ++i) comps[uf.find(i)].push_back(i);

  double lmin = std::numeric_limits<double>::infinity();
  for (const auto& idx : comps) {
    if (idx.empty()) continue;
    const int m = static_cast<int>(idx.size());
    CMat K(m, m);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        K(a, b) = (G.coeff(idx[a], idx[b]) + (a == b ? 1.0 : 0.0)) / (weight(idx[a]) * weight(idx[b]));
      }
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(K, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("pencil_constant: eigensolver failed");
    lmin = std::min(lmin, es.eigenvalues()(0));
  }
  if (!(lmin > 0.0)) throw NumericError("pencil_constant: non-positive pencil eigenvalue");
  return 1.0 / lmin;
}

double subelliptic_constant(const QuadraticSymbol& q, double s, int N) {
  require_accretive(q);
  return pencil_constant(weyl_matrix(q, N), weight_matrix(s, q.n(), N));
}

void require_block_form(const QuadraticSymbol& q, int n_primed, double tol_rel) {
  const int n = q.n();
  if (n_primed < 0 || n_primed > n) throw PreconditionError("block form: n_primed out of range");
  auto primed = [&](int k) { return (k < n ? k : k - n) < n_primed; };
  const double tol = tol_rel * std::max(q.norm(), 1.0);
  for (int a = 0; a < 2 * n; ++a) {
    for (int b = 0; b < 2 * n; ++b) {
      const cplx v = q.matrix()(a, b);
      if (primed(a) != primed(b) && std::abs(v) > tol) {
        throw PreconditionError("block form: primed and singular variables are coupled");
      }
      if (!primed(a) && !primed(b) && std::abs(v.real()) > tol) {
        throw PreconditionError("block form: the singular block must be purely imaginary");
      }
    }
  }
}

double directional_subelliptic_constant(const QuadraticSymbol& q_block, int n_primed, double s, int N,
                                        WeightSide side) {
  require_block_form(q_block, n_primed);
  require_accretive(q_block);
  return pencil_constant(weyl_matrix(q_block, N),
                         partial_weight_matrix(s, q_block.n(), n_primed, N, side));
}

CVec apply_semigroup(const SpMat& S, double t, const CVec& u0) {
  if (!(t >= 0.0)) throw InputError("apply_semigroup: t must be non-negative");
  if (S.rows() != S.cols() || S.cols() != u0.size()) throw InputError("apply_semigroup: dimension mismatch");
  double norm1 = 0.0;
  for (int k = 0; k < S.outerSize(); ++k) {
    double col = 0.0;
    for (SpMat::InnerIterator it(S, k); it; ++it) col += std::abs(it.value());
    norm1 = std::max(norm1, col);
  }
  // Steps with |h S|_1 <= 1 keep every Taylor term below the previous one.
  const int steps = std::max(1, static_cast<int>(std::ceil(t * norm1)));
  const double h = t / steps;
  CVec u = u0;
  for (int s = 0; s < steps; ++s) {
    CVec term = u;
    for (int k = 1; k <= 60; ++k) {
      term = (S * term) * cplx(-h / k);
      u += term;
      if (term.norm() <= 1e-17 * u.norm()) break;
    }
  }
  return u;
}

HeatDecayReport heat_decay(const QuadraticSymbol& q, double t, int N, std::uint64_t seed, int n_primed) {
  if (!(t >= 0.0)) throw InputError("heat_decay: t must be non-negative");
  require_accretive(q);
  const int n = q.n();
  if (n_primed < 0) n_primed = n;
  if (n_primed > n) throw InputError("heat_decay: n_primed out of range");

  const HermiteTruncation trunc(n, N);
  SphereSampler sampler(seed);
  const CVec u0 = sampler.unit(trunc.size()).cast<cplx>();
  const CVec u = apply_semigroup(weyl_matrix(q, N).square(), t, u0);

  HeatDecayReport r;
  r.t = t;
  r.N = N;
  r.seed = seed;
  r.cut_degree = N / 2;
  r.by_degree.assign(N + 1, 0.0);
  r.by_primed.assign(N + 1, 0.0);
  r.by_unprimed.assign(N + 1, 0.0);
  for (int i = 0; i < trunc.size(); ++i) {
    const double m = std::norm(u(i));
    int dp = 0, du = 0;
    for (int k = 0; k < n; ++k) (k < n_primed ? dp : du) += trunc.alpha(i)[k];
    r.by_degree[trunc.degree(i)] += m;
    r.by_primed[dp] += m;
    r.by_unprimed[du] += m;
    r.total_mass += m;
    if (trunc.degree(i) > r.cut_degree) r.high_degree_mass += m;
  }
  r.high_degree_fraction = r.total_mass > 0.0 ? r.high_degree_mass / r.total_mass : 0.0;
  return r;
}

}  // namespace quadsym
