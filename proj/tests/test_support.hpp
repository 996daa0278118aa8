#pragma once

// Random instances and independent numerical oracles for the tests. Nothing
// here calls into the library except the QuadraticSymbol constructor.

#include "quadsym/symplectic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace testing {

using quadsym::CMat;
using quadsym::CVec;
using quadsym::Mat;
using quadsym::QuadraticSymbol;
using quadsym::Vec;
using quadsym::cplx;

inline constexpr double pi = std::numbers::pi;

struct Rng {
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double normal() { return nd(eng); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
  Vec vec(int d) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v(i) = normal();
    return v;
  }
  Mat mat(int r, int c) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = normal();
    return m;
  }
  Mat sym(int d) {
    Mat m = mat(d, d);
    return 0.5 * (m + m.transpose());
  }
  std::mt19937_64 eng;
  std::normal_distribution<double> nd{0.0, 1.0};
};

inline Mat J(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Mat::Identity(n, n);
  j.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return j;
}

/// Re Q = B B^T with B of the given rank, Im Q a random symmetric matrix.
inline QuadraticSymbol random_symbol(Rng& rng, int n, int rank) {
  const Mat B = rng.mat(2 * n, rank);
  return QuadraticSymbol(Mat(B * B.transpose()), rng.sym(2 * n));
}

inline QuadraticSymbol random_symbol(Rng& rng, int n) { return random_symbol(rng, n, rng.integer(1, 2 * n)); }

/// Product of symplectic shears and a symplectic dilation.
inline Mat random_symplectic(Rng& rng, int n) {
  Mat P = Mat::Identity(2 * n, 2 * n);
  for (int k = 0; k < 3; ++k) {
    Mat up = Mat::Identity(2 * n, 2 * n), lo = Mat::Identity(2 * n, 2 * n);
    up.topRightCorner(n, n) = 0.5 * rng.sym(n);
    lo.bottomLeftCorner(n, n) = 0.5 * rng.sym(n);
    P = P * up * lo;
  }
  Mat A = Mat::Identity(n, n) + 0.3 * rng.mat(n, n);
  Mat D = Mat::Zero(2 * n, 2 * n);
  D.topLeftCorner(n, n) = A;
  D.bottomRightCorner(n, n) = A.inverse().transpose();
  return P * D;
}

/// Monomial-level oracle: q(X) = sum_ij Q_ij X_i X_j.
inline cplx eval_oracle(const QuadraticSymbol& q, const Vec& X) {
  cplx s = 0.0;
  for (int i = 0; i < X.size(); ++i)
    for (int j = 0; j < X.size(); ++j) s += q.matrix()(i, j) * X(i) * X(j);
  return s;
}

/// exp(A) v by its Taylor series (no scaling), for small |A|.
inline CVec taylor_expv(const CMat& A, const CVec& v) {
  CVec term = v, out = v;
  for (int k = 1; k < 200; ++k) {
    term = A * term / static_cast<double>(k);
    out += term;
    if (term.norm() < 1e-18 * out.norm()) break;
  }
  return out;
}

/// Dormand-Prince 5(4) with step control for X' = A X on [0, t].
inline Vec dopri_linear(const Mat& A, const Vec& X0, double t, double rtol = 1e-12) {
  static const double a[7][6] = {{},
                                 {1.0 / 5},
                                 {3.0 / 40, 9.0 / 40},
                                 {44.0 / 45, -56.0 / 15, 32.0 / 9},
                                 {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
                                 {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
                                 {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double b5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
  static const double b4[7] = {5179.0 / 57600, 0, 7571.0 / 16695, 393.0 / 640, -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
  const double dir = t >= 0 ? 1.0 : -1.0;
  double s = 0.0, h = dir * std::min(std::abs(t), 1e-3);
  Vec X = X0;
  while (dir * (t - s) > 0) {
    if (dir * (s + h - t) > 0) h = t - s;
    Vec k[7];
    for (int i = 0; i < 7; ++i) {
      Vec Y = X;
      for (int j = 0; j < i; ++j) Y += h * a[i][j] * k[j];
      k[i] = A * Y;
    }
    Vec x5 = X, x4 = X;
    for (int i = 0; i < 7; ++i) {
      x5 += h * b5[i] * k[i];
      x4 += h * b4[i] * k[i];
    }
    const double err = (x5 - x4).norm() / (rtol * std::max(1.0, x5.norm()));
    if (err <= 1.0) {
      s += h;
      X = x5;
    }
    h *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
  }
  return X;
}

/// k-th derivative at 0 of an entire function f by the Cauchy integral on |z| = r.
inline cplx cauchy_derivative(const std::function<cplx(cplx)>& f, int k, double r, int points = 128) {
  cplx s = 0.0;
  for (int j = 0; j < points; ++j) {
    const cplx z = std::polar(r, 2.0 * pi * j / points);
    s += f(z) / std::pow(z, k);
  }
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return s / static_cast<double>(points) * fact;
}

/// Central difference of f along direction e.
inline double central_difference(const std::function<double(const Vec&)>& f, const Vec& X, const Vec& e,
                                 double h = 1e-5) {
  return (f(X + h * e) - f(X - h * e)) / (2.0 * h);
}

/// Gauss-Hermite nodes/weights for weight e^{-u^2} by Golub-Welsch.
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int m) {
  Mat T = Mat::Zero(m, m);
  for (int i = 1; i < m; ++i) T(i, i - 1) = T(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(T);
  std::vector<double> x(m), w(m);
  for (int i = 0; i < m; ++i) {
    x[i] = es.eigenvalues()(i);
    w[i] = std::sqrt(pi) * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
  return {x, w};
}

/// Normalized Hermite functions h_0..h_kmax of -d^2 + x^2 at x.
inline std::vector<double> hermite_functions(int kmax, double x) {
  std::vector<double> h(kmax + 1);
  h[0] = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
  if (kmax >= 1) h[1] = std::sqrt(2.0) * x * h[0];
  for (int k = 2; k <= kmax; ++k) h[k] = std::sqrt(2.0 / k) * x * h[k - 1] - std::sqrt((k - 1.0) / k) * h[k - 2];
  return h;
}

inline double min_eig(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// The Fokker-Planck symbol eta^2 + v^2/4 + i(v xi - a x eta) in (x, v, xi, eta).
inline QuadraticSymbol fokker_planck(double a = 1.0) {
  Mat re = Mat::Zero(4, 4), im = Mat::Zero(4, 4);
  re(1, 1) = 0.25;
  re(3, 3) = 1.0;
  im(1, 2) = im(2, 1) = 0.5;
  im(0, 3) = im(3, 0) = -0.5 * a;
  return QuadraticSymbol(re, im);
}

/// xi^2 + i x xi.
inline QuadraticSymbol degenerate_symbol() {
  Mat re = Mat::Zero(2, 2), im = Mat::Zero(2, 2);
  re(1, 1) = 1.0;
  im(0, 1) = im(1, 0) = 0.5;
  return QuadraticSymbol(re, im);
}

inline QuadraticSymbol harmonic() { return QuadraticSymbol(Mat(Mat::Identity(2, 2)), Mat(Mat::Zero(2, 2))); }

/// q1 (n1 variables, primed first) + i q2 (n2 variables), assembled in (x', x'', xi', xi'').
inline QuadraticSymbol direct_sum(const CMat& Q1, const Mat& Q2) {
  const int n1 = static_cast<int>(Q1.rows() / 2), n2 = static_cast<int>(Q2.rows() / 2), n = n1 + n2;
  std::vector<int> p1, p2;
  for (int i = 0; i < n1; ++i) p1.push_back(i);
  for (int i = 0; i < n1; ++i) p1.push_back(n + i);
  for (int i = 0; i < n2; ++i) p2.push_back(n1 + i);
  for (int i = 0; i < n2; ++i) p2.push_back(n + n1 + i);
  CMat Q = CMat::Zero(2 * n, 2 * n);
  for (int i = 0; i < 2 * n1; ++i)
    for (int j = 0; j < 2 * n1; ++j) Q(p1[i], p1[j]) = Q1(i, j);
  for (int i = 0; i < 2 * n2; ++i)
    for (int j = 0; j < 2 * n2; ++j) Q(p2[i], p2[j]) = cplx(0.0, Q2(i, j));
  return QuadraticSymbol(Q);
}

}  // namespace testing
