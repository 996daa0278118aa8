#include "quadsym/wick.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace quadsym {

namespace {

constexpr double kPi = std::numbers::pi;

// E[Y^j] for Y ~ N(0, var).
double gaussian_moment(int j, double var) {
  if (j % 2 == 1) return 0.0;
  double m = 1.0;
  for (int k = j - 1; k > 0; k -= 2) m *= k;
  return m * std::pow(var, j / 2);
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Overlap in one dimension by the generating function of h_k.
std::vector<cplx> overlaps_1d(int kmax, double y, double eta) {
  const double A = 0.5 + kPi;
  const cplx b0(2.0 * kPi * y, -2.0 * kPi * eta);
  const cplx c0(-kPi * y * y, 2.0 * kPi * y * eta);
  const double p = 1.0 / (2.0 * A) - 0.5;
  const cplx l = std::sqrt(2.0) * b0 / (2.0 * A);
  const cplx c = b0 * b0 / (4.0 * A) + c0;
  const double K = std::pow(kPi, -0.25) * std::pow(2.0, 0.25) * std::sqrt(kPi / A);
  std::vector<cplx> f(kmax + 1);
  f[0] = K * std::exp(c);
  if (kmax >= 1) f[1] = l * f[0];
  for (int k = 2; k <= kmax; ++k) {
    f[k] = (l * f[k - 1] + 2.0 * p * std::sqrt(k - 1.0) * f[k - 2]) / std::sqrt(static_cast<double>(k));
  }
  return f;
}

}  // namespace

Polynomial gaussian_convolve_poly(const Polynomial& a) {
  const double var = 1.0 / (4.0 * kPi);
  const int d = 2 * a.n();
  Polynomial out(a.n());
  for (const auto& [e, c] : a.terms()) {
    // prod_k (X_k + Y_k)^{e_k} averaged coordinate by coordinate.
    std::vector<std::pair<Polynomial::Exponent, double>> partial{{Polynomial::Exponent(d, 0), 1.0}};
    for (int k = 0; k < d; ++k) {
      std::vector<std::pair<Polynomial::Exponent, double>> next;
      for (const auto& [pe, pc] : partial) {
        for (int j = 0; j <= e[k]; j += 2) {
          auto ne = pe;
          ne[k] = e[k] - j;
          next.emplace_back(ne, pc * binom(e[k], j) * gaussian_moment(j, var));
        }
      }
      partial = std::move(next);
    }
    for (const auto& [pe, pc] : partial) out.add_term(pe, c * pc);
  }
  return out;
}

Polynomial lerner_to_standard(const Polynomial& a) { return scale_momenta(a, 1.0 / (2.0 * kPi)); }

Polynomial standard_to_lerner(const Polynomial& a) { return scale_momenta(a, 2.0 * kPi); }

TruncatedOperator wick_matrix(const Polynomial& a, int N) {
  return weyl_matrix(gaussian_convolve_poly(a), N, Convention::lerner);
}

Polynomial wick_composition_symbol(const Polynomial& a, const Polynomial& b) {
  return a * b - gradient_dot(a, b) * cplx(1.0 / (4.0 * kPi)) +
         poisson_bracket(a, b) * (1.0 / cplx(0.0, 4.0 * kPi));
}

double wick_composition_residual(const Polynomial& a, const Polynomial& b, int N) {
  if (a.n() != b.n()) throw InputError("wick_composition_residual: dimension mismatch");
  const int n = a.n();
  const TruncatedOperator B = wick_matrix(b, N);
  const TruncatedOperator A = wick_matrix(a, B.N_out);
  const TruncatedOperator C = wick_matrix(wick_composition_symbol(a, b), N);
  const int top = std::max(A.N_out, C.N_out);
  const int rows = static_cast<int>(binomial_size(n, top));
  const int cols = static_cast<int>(binomial_size(n, N));
  CMat diff = CMat::Zero(rows, cols);
  const CMat AB = CMat(A.matrix * B.matrix);
  diff.topRows(AB.rows()) += AB;
  const CMat Cd = CMat(C.matrix);
  diff.topRows(Cd.rows()) -= Cd;
  if (diff.size() == 0) return 0.0;
  const CMat gram = diff.adjoint() * diff;
  Eigen::SelfAdjointEigenSolver<CMat> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

cplx wavepacket_overlap(const MultiIndex& alpha, const Vec& Y) {
  const int n = static_cast<int>(alpha.size());
  if (Y.size() != 2 * n) throw InputError("wavepacket_overlap: dimension mismatch");
  cplx out = 1.0;
  for (int k = 0; k < n; ++k) {
    if (alpha[k] < 0) throw InputError("wavepacket_overlap: negative index");
    out *= overlaps_1d(alpha[k], Y(k), Y(n + k))[alpha[k]];
  }
  return out;
}

cplx wave_packet_transform(const CVec& coefficients, const HermiteTruncation& t, const Vec& Y) {
  if (coefficients.size() != t.size()) throw InputError("wave_packet_transform: size mismatch");
  const int n = t.n();
  if (Y.size() != 2 * n) throw InputError("wave_packet_transform: dimension mismatch");
  std::vector<std::vector<cplx>> tables;
  for (int k = 0; k < n; ++k) tables.push_back(overlaps_1d(t.N(), Y(k), Y(n + k)));
  cplx acc = 0.0;
  for (int i = 0; i < t.size(); ++i) {
    cplx v = coefficients(i);
    for (int k = 0; k < n; ++k) v *= tables[k][t.alpha(i)[k]];
    acc += v;
  }
  return acc;
}

}  // namespace quadsym
