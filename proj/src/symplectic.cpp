#include "quadsym/symplectic.hpp"

#include "quadsym/quadrature.hpp"
#include "quadsym/sampling.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

namespace quadsym {

namespace {

void require_dim(const QuadraticSymbol& q, const Vec& X, const char* what) {
  if (X.size() != q.dim()) {
    throw InputError(std::string(what) + ": vector of size " + std::to_string(X.size()) +
                     " for a symbol on R^" + std::to_string(q.dim()));
  }
}

}  // namespace

QuadraticSymbol::QuadraticSymbol(const CMat& coefficients) {
  if (coefficients.rows() != coefficients.cols() || coefficients.rows() % 2 != 0 ||
      coefficients.rows() == 0) {
    throw InputError("quadratic symbol: coefficient matrix must be square of even positive size");
  }
  if (!coefficients.allFinite()) throw InputError("quadratic symbol: non-finite coefficient");
  n_ = static_cast<int>(coefficients.rows() / 2);
  Q_ = 0.5 * (coefficients + coefficients.transpose());
}

QuadraticSymbol::QuadraticSymbol(const Mat& re, const Mat& im) {
  if (re.rows() != im.rows() || re.cols() != im.cols()) {
    throw InputError("quadratic symbol: real and imaginary parts differ in shape");
  }
  CMat Q(re.rows(), re.cols());
  Q.real() = re;
  Q.imag() = im;
  *this = QuadraticSymbol(Q);
}

QuadraticSymbol QuadraticSymbol::real_part() const {
  return QuadraticSymbol(Q_.real().cast<cplx>().eval());
}

QuadraticSymbol QuadraticSymbol::imag_part() const {
  return QuadraticSymbol(Q_.imag().cast<cplx>().eval());
}

double QuadraticSymbol::norm() const {
  if (Q_.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(Q_);
  return svd.singularValues()(0);
}

SignCheck check_accretive(const QuadraticSymbol& q, double rel_tol) {
  const Mat re = q.re();
  Eigen::SelfAdjointEigenSolver<Mat> es(re, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  SignCheck out;
  out.min_eigenvalue = ev(0);
  out.tolerance = rel_tol * scale;
  // Rounding of an exactly singular form produces |lambda| ~ eps * scale; only
  // clearly negative values inside the tolerance band count as borderline.
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  if (ev(0) < -out.tolerance) {
    out.status = SignStatus::negative;
  } else if (ev(0) < -rounding) {
    out.status = SignStatus::borderline;
  } else {
    out.status = SignStatus::ok;
  }
  return out;
}

SignCheck require_accretive(const QuadraticSymbol& q, double rel_tol) {
  SignCheck check = check_accretive(q, rel_tol);
  if (check.status == SignStatus::negative) {
    throw InputError("Re q is not non-negative: smallest eigenvalue of Re Q is " +
                     std::to_string(check.min_eigenvalue) + " < -" +
                     std::to_string(check.tolerance));
  }
  return check;
}

Mat symplectic_matrix(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = -Mat::Identity(n, n);
  J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return J;
}

double sigma(const Vec& X, const Vec& Y) {
  const Eigen::Index n = X.size() / 2;
  return X.tail(n).dot(Y.head(n)) - X.head(n).dot(Y.tail(n));
}

cplx sigma(const CVec& X, const CVec& Y) {
  const Eigen::Index n = X.size() / 2;
  return (X.tail(n).transpose() * Y.head(n))(0) - (X.head(n).transpose() * Y.tail(n))(0);
}

cplx evaluate(const QuadraticSymbol& q, const Vec& X) {
  require_dim(q, X, "evaluate");
  const CVec x = X.cast<cplx>();
  return (x.transpose() * q.matrix() * x)(0);
}

cplx polarized(const QuadraticSymbol& q, const Vec& X, const Vec& Y) {
  require_dim(q, X, "polarized");
  require_dim(q, Y, "polarized");
  return (X.cast<cplx>().transpose() * q.matrix() * Y.cast<cplx>())(0);
}

HamiltonMap hamilton_map(const QuadraticSymbol& q) {
  // sigma(X, F Y) = X^T J F Y = X^T Q Y  =>  F = J^{-1} Q = -J Q.
  const Mat J = symplectic_matrix(q.n());
  return HamiltonMap{-J.cast<cplx>() * q.matrix()};
}

QuadraticSymbol symbol_from_hamilton_map(const CMat& F) {
  const Mat J = symplectic_matrix(static_cast<int>(F.rows() / 2));
  return QuadraticSymbol((J.cast<cplx>() * F).eval());
}

Vec hamilton_flow(const Mat& im_f, double t, const Vec& X) {
  if (!std::isfinite(t)) throw InputError("hamilton_flow: non-finite time");
  if (im_f.rows() != X.size()) throw InputError("hamilton_flow: dimension mismatch");
  const Mat generator = (2.0 * t) * im_f;
  return generator.exp() * X;
}

double average_real_part(const QuadraticSymbol& q, double T, const Vec& X, int order) {
  if (!(T > 0.0)) throw InputError("average_real_part: T must be positive");
  require_dim(q, X, "average_real_part");
  const Mat im_f = hamilton_map(q).im();
  const Mat re_q = q.re();
  const QuadratureRule rule = gauss_legendre(order);
  double acc = 0.0;
  for (int i = 0; i < order; ++i) {
    const Vec Y = hamilton_flow(im_f, T * rule.nodes[i], X);
    acc += rule.weights[i] * Y.dot(re_q * Y);
  }
  // (1/2T) * T * sum w_i f(T s_i)
  return 0.5 * acc;
}

QuadraticSymbol poisson_bracket_quadratic(const QuadraticSymbol& a, const QuadraticSymbol& b) {
  if (a.n() != b.n()) throw InputError("poisson_bracket_quadratic: dimension mismatch");
  const CMat Fa = hamilton_map(a).F;
  const CMat Fb = hamilton_map(b).F;
  return symbol_from_hamilton_map(-2.0 * (Fa * Fb - Fb * Fa));
}

std::vector<cplx> numerical_range_samples(const QuadraticSymbol& q, int count,
                                          std::uint64_t seed) {
  if (count < 1) throw InputError("numerical_range_samples: count must be >= 1");
  SphereSampler sampler(seed);
  std::vector<cplx> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(evaluate(q, sampler.unit(q.dim())));
  return out;
}

QuadraticSymbol conjugate(const QuadraticSymbol& q, const Mat& P) {
  if (P.rows() != q.dim() || P.cols() != q.dim()) throw InputError("conjugate: dimension mismatch");
  const CMat Pc = P.cast<cplx>();
  return QuadraticSymbol((Pc.transpose() * q.matrix() * Pc).eval());
}

}  // namespace quadsym
