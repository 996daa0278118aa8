#include "quadsym/singular_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace quadsym {

namespace {

constexpr double kGramConditionCutoff = 1e8;

// Golden-section maximisation of a unimodal-near-the-bracket function.
template <typename F>
double golden_max(F&& f, double lo, double hi, int iters = 80) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return std::max(fc, fd);
}

// Maximise a periodic function on [0, period) by a grid scan plus golden refinement.
template <typename F>
double periodic_max(F&& f, double period, int grid = 2048) {
  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < grid; ++i) {
    const double v = f(period * i / grid);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double h = period / grid;
  return std::max(best, golden_max(f, (best_i - 1) * h, (best_i + 1) * h));
}

}  // namespace

Mat kernel(const Mat& M, double tol_rel) {
  if (!(tol_rel > 0.0) || tol_rel > 1e-2) throw InputError("kernel: tol_rel must lie in (0, 1e-2]");
  const Eigen::Index cols = M.cols();
  if (!M.allFinite()) throw NumericError("kernel: non-finite matrix");
  if (M.rows() == 0 || M.norm() == 0.0) return Mat::Identity(cols, cols);

  // Pad to at least square so that the full V is available from the SVD.
  Mat A = Mat::Zero(std::max(M.rows(), cols), cols);
  A.topRows(M.rows()) = M;
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericError("kernel: SVD failed");
  const auto& sv = svd.singularValues();
  const double cutoff = tol_rel * sv(0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

std::string to_string(SymplecticFlag flag) {
  switch (flag) {
    case SymplecticFlag::yes: return "true";
    case SymplecticFlag::no: return "false";
    case SymplecticFlag::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

SingularSpaceReport singular_space(const QuadraticSymbol& q, double tol_rel) {
  const int dim = q.dim();
  const HamiltonMap F = hamilton_map(q);
  const Mat re_f = F.re();
  const Mat im_f = F.im();

  SingularSpaceReport report;
  report.tol_rel = tol_rel;

  // Stack Re F (Im F)^j, each block scaled to unit Frobenius norm so that a
  // small-norm factor is not swallowed by the relative cutoff of a large one.
  Mat stacked(0, dim);
  Mat power = Mat::Identity(dim, dim);
  Mat basis;
  for (int k = 0; k < dim; ++k) {
    Mat block = re_f * power;
    const double nrm = block.norm();
    if (nrm > 0.0) block /= nrm;
    Mat next(stacked.rows() + dim, dim);
    next << stacked, block;
    stacked = std::move(next);
    basis = kernel(stacked, tol_rel);
    report.kernel_dims.push_back(static_cast<int>(basis.cols()));
    power = im_f * power;
  }
  report.basis_S = basis;
  report.dim_S = static_cast<int>(basis.cols());

  for (int k = 0; k < dim; ++k) {
    if (report.kernel_dims[k] == report.dim_S) {
      report.k0 = k;
      break;
    }
  }

  if (report.dim_S == 0) {
    report.S_symplectic = SymplecticFlag::yes;
    report.gram_condition = 1.0;
  } else if (report.dim_S % 2 == 1) {
    report.S_symplectic = SymplecticFlag::no;
    report.gram_condition = std::numeric_limits<double>::infinity();
  } else {
    const Mat gram = basis.transpose() * symplectic_matrix(q.n()) * basis;
    Eigen::JacobiSVD<Mat> svd(gram);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    report.gram_condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    // basis is orthonormal, so smax <= 1; a Gram degenerate at kernel precision is a plain "no".
    if (report.gram_condition <= kGramConditionCutoff) {
      report.S_symplectic = SymplecticFlag::yes;
    } else if (smin <= 10.0 * tol_rel * std::max(smax, 1.0)) {
      report.S_symplectic = SymplecticFlag::no;
    } else {
      report.S_symplectic = SymplecticFlag::indeterminate;
    }
  }

  if (report.k0) report.exponent = predicted_exponent(*report.k0);
  return report;
}

Mat averaged_form_matrix(const QuadraticSymbol& q, int k0) {
  if (k0 < 0) throw InputError("averaged_form_matrix: k0 must be >= 0");
  const Mat re_q = q.re();
  const Mat im_f = hamilton_map(q).im();
  Mat R = Mat::Zero(q.dim(), q.dim());
  Mat power = Mat::Identity(q.dim(), q.dim());
  for (int j = 0; j <= k0; ++j) {
    R += power.transpose() * re_q * power;
    power = im_f * power;
  }
  return 0.5 * (R + R.transpose());
}

double min_modulus_on_sphere(const QuadraticSymbol& q, const Mat& basis) {
  const Eigen::Index d = basis.cols();
  if (d == 0) return std::numeric_limits<double>::infinity();
  const CMat Bc = basis.cast<cplx>();
  const CMat QS = Bc.transpose() * q.matrix() * Bc;
  if (d == 1) return std::abs(QS(0, 0));
  if (d == 2) {
    // q(cos p, sin p) traces an ellipse in C as p runs over [0, pi).
    auto neg_modulus = [&](double p) {
      const double c = std::cos(p), s = std::sin(p);
      return -std::abs(QS(0, 0) * c * c + 2.0 * QS(0, 1) * c * s + QS(1, 1) * s * s);
    };
    return -periodic_max(neg_modulus, std::numbers::pi, 4096);
  }
  // For d >= 3 the joint range {(c^T A c, c^T B c)} on the sphere is convex, so the
  // distance to 0 is the best supporting half-plane: max_t lambda_min(cos t A + sin t B).
  const Mat A = QS.real();
  const Mat B = QS.imag();
  auto support = [&](double t) {
    Mat C = std::cos(t) * A + std::sin(t) * B;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (C + C.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  };
  return std::max(0.0, periodic_max(support, 2.0 * std::numbers::pi, 2048));
}

bool check_partial_ellipticity(const QuadraticSymbol& q, const SingularSpaceReport& report,
                               double tol_rel) {
  if (report.dim_S == 0) return true;
  return min_modulus_on_sphere(q, report.basis_S) > tol_rel * std::max(q.norm(), 1e-300);
}

Mat symplectic_basis(const Mat& span, double pivot_tol) {
  const Eigen::Index d = span.cols();
  if (d % 2 != 0) throw PreconditionError("symplectic_basis: odd-dimensional subspace");
  const Eigen::Index m = d / 2;
  const Eigen::Index dim = span.rows();
  Mat e(dim, m), f(dim, m);
  Mat pool = span;
  for (Eigen::Index k = 0; k < m; ++k) {
    // Re-orthonormalise the remaining pool for conditioning.
    Eigen::HouseholderQR<Mat> qr(pool);
    pool = qr.householderQ() * Mat::Identity(dim, pool.cols());
    const Eigen::Index p = pool.cols();
    double best = 0.0;
    Eigen::Index bi = 0, bj = 1;
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = i + 1; j < p; ++j) {
        const double s = sigma(Vec(pool.col(i)), Vec(pool.col(j)));
        if (std::abs(s) > best) {
          best = std::abs(s);
          bi = i;
          bj = j;
        }
      }
    }
    if (best < pivot_tol) {
      throw NumericError("symplectic_basis: pivot " + std::to_string(best) + " below tolerance");
    }
    const double s = sigma(Vec(pool.col(bi)), Vec(pool.col(bj)));
    const Vec fk = pool.col(bi) / std::sqrt(std::abs(s));
    const Vec ek = pool.col(bj) * ((s > 0 ? 1.0 : -1.0) / std::sqrt(std::abs(s)));
    e.col(k) = ek;
    f.col(k) = fk;
    Mat rest(dim, p - 2);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (i == bi || i == bj) continue;
      const Vec v = pool.col(i);
      rest.col(c++) = v - sigma(v, ek) * fk + sigma(v, fk) * ek;
    }
    pool = std::move(rest);
  }
  Mat out(dim, d);
  out << e, f;
  return out;
}

Mat SymplecticSplit::canonical_basis() const {
  const Eigen::Index np = n_primed(), ns = n_singular();
  const Eigen::Index dim = basis_perp.rows();
  Mat P(dim, dim);
  P << basis_perp.leftCols(np), basis_S.leftCols(ns), basis_perp.rightCols(np),
      basis_S.rightCols(ns);
  return P;
}

SymplecticSplit symplectic_split(const QuadraticSymbol& q, const SingularSpaceReport& report) {
  if (report.S_symplectic != SymplecticFlag::yes) {
    throw PreconditionError("symplectic_split: singular space is not (certifiably) symplectic");
  }
  SymplecticSplit split;
  const int dim = q.dim();
  if (report.dim_S == 0) {
    split.basis_perp = Mat::Identity(dim, dim);
    split.basis_S = Mat(dim, 0);
    split.Q1 = q.matrix();
    split.Q2 = Mat(0, 0);
    return split;
  }
  const Mat J = symplectic_matrix(q.n());
  // S^{sigma perp} = {Y : Y^T J s = 0 for all s in S} = Ker (J basis_S)^T.
  const Mat perp = kernel((J * report.basis_S).transpose(), report.tol_rel);
  if (perp.cols() + report.dim_S != dim) {
    throw NumericError("symplectic_split: S^{sigma perp} has unexpected dimension");
  }
  split.basis_S = symplectic_basis(report.basis_S);
  split.basis_perp = perp.cols() > 0 ? symplectic_basis(perp) : Mat(dim, 0);

  const CMat Pp = split.basis_perp.cast<cplx>();
  const CMat Ps = split.basis_S.cast<cplx>();
  split.Q1 = Pp.transpose() * q.matrix() * Pp;
  split.Q1 = 0.5 * (split.Q1 + split.Q1.transpose()).eval();
  const CMat on_S = Ps.transpose() * q.matrix() * Ps;
  split.Q2 = 0.5 * (on_S.imag() + on_S.imag().transpose());
  split.q2_real_residual = on_S.real().norm() / std::max(q.norm(), 1e-300);
  return split;
}

double split_residual(const QuadraticSymbol& q, const SymplecticSplit& split, const Vec& X) {
  const Eigen::Index np = split.basis_perp.cols();
  Mat P(X.size(), X.size());
  P << split.basis_perp, split.basis_S;
  const Vec coords = P.fullPivLu().solve(X);
  const CVec Xp = coords.head(np).cast<cplx>();
  const CVec Xs = coords.tail(X.size() - np).cast<cplx>();
  const cplx q1 = (Xp.transpose() * split.Q1 * Xp)(0);
  const double q2 = Xs.size() > 0 ? (Xs.real().transpose() * split.Q2 * Xs.real())(0) : 0.0;
  return std::abs(evaluate(q, X) - q1 - cplx(0.0, q2));
}

QuadraticSymbol block_presentation(const QuadraticSymbol& q, const SymplecticSplit& split) {
  return conjugate(q, split.canonical_basis());
}

Rational predicted_exponent(int k0) {
  if (k0 < 0) throw PreconditionError("predicted_exponent: k0 undefined");
  // 2/(2k0+1) is already in lowest terms since 2k0+1 is odd.
  return Rational{2, 2L * k0 + 1};
}

Rational predicted_exponent(const SingularSpaceReport& report) {
  if (!report.k0) throw PreconditionError("predicted_exponent: k0 undefined");
  return predicted_exponent(*report.k0);
}

}  // namespace quadsym
