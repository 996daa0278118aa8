#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadsym/wick.hpp"
#include "test_support.hpp"

using namespace quadsym;
using namespace testing;

namespace {

// int a(X+Y) e^{-2 pi |Y|^2} 2^n dY by tensor Gauss-Hermite.
cplx convolution_oracle(const Polynomial& a, const Vec& X, int nodes = 4) {
  const auto [u, w] = gauss_hermite(nodes);
  const int d = static_cast<int>(X.size());
  std::vector<int> idx(d, 0);
  cplx acc = 0.0;
  while (true) {
    Vec Y(d);
    double weight = 1.0;
    for (int k = 0; k < d; ++k) {
      Y(k) = u[idx[k]] / std::sqrt(2.0 * pi);
      weight *= w[idx[k]] / std::sqrt(pi);
    }
    acc += weight * a.evaluate(X + Y);
    int k = 0;
    while (k < d && ++idx[k] == nodes) idx[k++] = 0;
    if (k == d) break;
  }
  return acc;
}

// (h_k, phi_{y,eta}) by the trapezoid rule on [-14, 14].
cplx overlap_oracle(int k, double y, double eta) {
  const int M = 8000;
  const double L = 14.0, h = 2 * L / M;
  cplx acc = 0.0;
  for (int i = 0; i <= M; ++i) {
    const double x = -L + i * h;
    const double hk = hermite_functions(k, x)[k];
    const cplx phi = std::pow(2.0, 0.25) * std::exp(-pi * (x - y) * (x - y)) * std::exp(cplx(0, 2 * pi * (x - y) * eta));
    acc += (i == 0 || i == M ? 0.5 : 1.0) * h * hk * std::conj(phi);
  }
  return acc;
}

Polynomial random_psd_quadratic(Rng& rng, int n) {
  const Mat B = rng.mat(2 * n, rng.integer(1, 2 * n));
  return Polynomial::from_quadratic(QuadraticSymbol(Mat(B * B.transpose()), Mat::Zero(2 * n, 2 * n)));
}

}  // namespace

TEST_CASE("Gaussian convolution") {
  Rng rng(401);
  for (int t = 0; t < 20; ++t) {
    const int n = rng.integer(1, 3);
    const QuadraticSymbol q(rng.sym(2 * n), rng.sym(2 * n));
    const Polynomial a = Polynomial::from_quadratic(q);
    const Polynomial c = gaussian_convolve_poly(a);
    const Vec X = rng.vec(2 * n);
    const cplx oracle = convolution_oracle(a, X);
    CHECK(std::abs(c.evaluate(X) - oracle) <= 1e-8 * std::max(1.0, std::abs(oracle)));
    const cplx shift = q.matrix().trace() / (4.0 * pi);
    CHECK(std::abs(c.evaluate(X) - a.evaluate(X) - shift) <= 1e-12 * std::max(1.0, std::abs(a.evaluate(X))));
  }
  // Higher degree against the oracle.
  const Polynomial quartic = Polynomial::variable(1, 0) * Polynomial::variable(1, 0) * Polynomial::variable(1, 1) *
                             Polynomial::variable(1, 1);
  const Vec X = rng.vec(2);
  CHECK(std::abs(gaussian_convolve_poly(quartic).evaluate(X) - convolution_oracle(quartic, X)) <= 1e-10);
  const Polynomial lin = Polynomial::variable(2, 1) * cplx(2.0, 1.0);
  CHECK(std::abs((gaussian_convolve_poly(lin) - lin).evaluate(rng.vec(4))) == 0.0);
  const Polynomial one = Polynomial::constant(2, 3.0);
  CHECK(gaussian_convolve_poly(one).coefficient({0, 0, 0, 0}) == cplx(3.0));
}

TEST_CASE("normalization change round trip") {
  Rng rng(403);
  const QuadraticSymbol q(rng.sym(4), rng.sym(4));
  const Polynomial a = Polynomial::from_quadratic(q);
  const QuadraticSymbol back = lerner_to_standard(standard_to_lerner(a)).to_quadratic(1e-14);
  CHECK((back.matrix() - q.matrix()).cwiseAbs().maxCoeff() <= 1e-14);
  // A Lerner-normalized symbol equals the standard symbol a(x, xi / 2 pi).
  const CMat L = CMat(weyl_matrix(a, 6, Convention::lerner).matrix);
  const CMat P = CMat(weyl_matrix(lerner_to_standard(a), 6, Convention::standard).matrix);
  CHECK((L - P).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("Wick positivity and reconstruction") {
  Rng rng(405);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(1, 2);
    const CMat S = CMat(wick_matrix(random_psd_quadratic(rng, n), 20).square());
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (S + S.adjoint()), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) >= -1e-10);
  }
  const CMat I = CMat(wick_matrix(Polynomial::constant(2, 1.0), 10).square());
  CHECK((I - CMat::Identity(I.rows(), I.cols())).cwiseAbs().maxCoeff() <= 1e-14);
  const CMat C = CMat(wick_matrix(Polynomial::constant(1, cplx(0, -2.5)), 10).square());
  Eigen::JacobiSVD<CMat> svd(C);
  CHECK(svd.singularValues()(0) == doctest::Approx(2.5));
}

TEST_CASE("Wick composition residual") {
  Rng rng(407);
  const Polynomial c = Polynomial::constant(1, 2.0);
  const Polynomial b = Polynomial::from_quadratic(harmonic());
  CHECK(wick_composition_residual(c, b, 12) <= 1e-10);
  const Polynomial x = Polynomial::variable(1, 0), xi = Polynomial::variable(1, 1);
  CHECK(wick_composition_residual(x, xi, 12) <= 1e-9);
  const double r8 = wick_composition_residual(b, b, 8), r24 = wick_composition_residual(b, b, 24);
  CHECK(std::max(r24, 1e-9) / std::max(r8, 1e-9) <= 1.3);
  for (int t = 0; t < 10; ++t) {
    const Polynomial p = Polynomial::from_quadratic(QuadraticSymbol(rng.sym(2), rng.sym(2)));
    const Polynomial r = Polynomial::from_quadratic(QuadraticSymbol(rng.sym(2), rng.sym(2)));
    const double lo = wick_composition_residual(p, r, 8), hi = wick_composition_residual(p, r, 24);
    CHECK(std::max(hi, 1e-9) / std::max(lo, 1e-9) <= 1.3);
  }
}

TEST_CASE("wave packets") {
  Vec Y(2);
  Y << 0.0, 0.0;
  CHECK(std::abs(wavepacket_overlap({0}, Y) - overlap_oracle(0, 0.0, 0.0)) <= 1e-10);
  Rng rng(409);
  for (int t = 0; t < 10; ++t) {
    const int k = rng.integer(0, 8);
    const double y = rng.uniform(-2, 2), eta = rng.uniform(-2, 2);
    Y << y, eta;
    CHECK(std::abs(wavepacket_overlap({k}, Y) - overlap_oracle(k, y, eta)) <= 1e-10);
  }
  Y << 40.0, 0.0;
  CHECK(std::abs(wavepacket_overlap({3}, Y)) <= 1e-100);

  // Isometry: int |W h_0|^2 dy deta = 1.
  const HermiteTruncation t(1, 4);
  CVec u = CVec::Zero(t.size());
  u(0) = 1.0;
  const int M = 240;
  const double L = 6.0, h = 2 * L / M;
  double total = 0.0;
  for (int i = 0; i <= M; ++i) {
    for (int j = 0; j <= M; ++j) {
      Vec Z(2);
      Z << -L + i * h, -L + j * h;
      total += h * h * std::norm(wave_packet_transform(u, t, Z));
    }
  }
  CHECK(std::abs(total - 1.0) <= 1e-4);
  CHECK_THROWS_AS(wavepacket_overlap({1, 2}, Y), InputError);
}
