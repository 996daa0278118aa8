#include "quadsym/bracket.hpp"

#include "quadsym/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace quadsym {

namespace {

constexpr int kMaxOrder = 30;  // 4^30 < 2^63

BracketExpansion::Key ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// X, ImF X, ..., ImF^L X.
std::vector<Vec> orbit(const Mat& im_f, const Vec& X, int L) {
  std::vector<Vec> out;
  out.reserve(L + 1);
  out.push_back(X);
  for (int l = 1; l <= L; ++l) out.push_back(im_f * out.back());
  return out;
}

double evaluate_on_orbit(const BracketExpansion& e, const Mat& re_q, const std::vector<Vec>& ys) {
  double acc = 0.0;
  for (const auto& [key, c] : e.coeffs()) {
    acc += static_cast<double>(c) * ys[key.first].dot(re_q * ys[key.second]);
  }
  return acc;
}

// Rounding scale of the orbit sum: sum |c| |y_a| |y_b| ||Re Q||.
double orbit_tolerance(const BracketExpansion& e, double re_norm, const std::vector<Vec>& ys) {
  double acc = 0.0;
  for (const auto& [key, c] : e.coeffs()) acc += static_cast<double>(c) * ys[key.first].norm() * ys[key.second].norm();
  return 1e-9 * re_norm * acc;
}

double spectral_norm(const Mat& S) {
  if (S.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Null space of a symmetric non-negative form, counting eigenvalues below
// max(tol_rel * lambda_max, abs_floor) as zero.
Mat psd_kernel(const Mat& R, double tol_rel, double abs_floor) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (R + R.transpose()));
  const auto& ev = es.eigenvalues();
  const double lmax = ev.cwiseAbs().maxCoeff();
  const double cutoff = std::max(tol_rel * lmax, abs_floor);
  Eigen::Index count = 0;
  while (count < ev.size() && ev(count) <= cutoff) ++count;
  return es.eigenvectors().leftCols(count);
}

}  // namespace

BracketExpansion::BracketExpansion() { coeffs_[{0, 0}] = 1; }

std::int64_t BracketExpansion::coefficient(int l1, int l2) const {
  auto it = coeffs_.find(ordered(l1, l2));
  return it == coeffs_.end() ? 0 : it->second;
}

std::int64_t BracketExpansion::mass() const {
  std::int64_t m = 0;
  for (const auto& kv : coeffs_) m += kv.second;
  return m;
}

BracketExpansion BracketExpansion::apply_H() const {
  if (order_ >= kMaxOrder) throw InputError("apply_H: order exceeds integer coefficient range");
  BracketExpansion out;
  out.coeffs_.clear();
  out.order_ = order_ + 1;
  for (const auto& [key, c] : coeffs_) {
    out.coeffs_[ordered(key.first + 1, key.second)] += 2 * c;
    out.coeffs_[ordered(key.first, key.second + 1)] += 2 * c;
  }
  return out;
}

BracketExpansion BracketExpansion::power(int k) {
  if (k < 0 || k > kMaxOrder) throw InputError("BracketExpansion::power: order out of range");
  BracketExpansion e;
  for (int i = 0; i < k; ++i) e = e.apply_H();
  return e;
}

double evaluate(const BracketExpansion& e, const QuadraticSymbol& q, const Vec& X) {
  if (X.size() != q.dim()) throw InputError("evaluate: dimension mismatch");
  int L = 0;
  for (const auto& kv : e.coeffs()) L = std::max(L, kv.first.second);
  return evaluate_on_orbit(e, q.re(), orbit(hamilton_map(q).im(), X, L));
}

Mat bracket_form_matrix(const BracketExpansion& e, const QuadraticSymbol& q) {
  const Mat re_q = q.re();
  const Mat im_f = hamilton_map(q).im();
  int L = 0;
  for (const auto& kv : e.coeffs()) L = std::max(L, kv.first.second);
  std::vector<Mat> powers{Mat::Identity(q.dim(), q.dim())};
  for (int l = 1; l <= L; ++l) powers.push_back(im_f * powers.back());
  Mat M = Mat::Zero(q.dim(), q.dim());
  for (const auto& [key, c] : e.coeffs()) {
    M += static_cast<double>(c) * powers[key.first].transpose() * re_q * powers[key.second];
  }
  return 0.5 * (M + M.transpose());
}

double bracket_tolerance(const QuadraticSymbol& q, const Vec& X, int j) {
  if (X.size() != q.dim()) throw InputError("bracket_tolerance: dimension mismatch");
  if (j < 0 || j > kMaxOrder) throw InputError("bracket_tolerance: order out of range");
  return orbit_tolerance(BracketExpansion::power(j), spectral_norm(q.re()), orbit(hamilton_map(q).im(), X, j));
}

std::optional<int> finite_type_order(const QuadraticSymbol& q, const Vec& X, int kmax) {
  if (X.size() != q.dim()) throw InputError("finite_type_order: dimension mismatch");
  if (X.norm() == 0.0) throw InputError("finite_type_order: X must be non-zero");
  if (kmax < 0) kmax = 2 * (q.dim() - 1);
  if (2 * kmax > kMaxOrder) throw InputError("finite_type_order: kmax too large");

  const Mat re_q = q.re();
  const double re_norm = spectral_norm(re_q);
  const std::vector<Vec> ys = orbit(hamilton_map(q).im(), X, 2 * kmax);
  BracketExpansion e;
  for (int j = 0; j <= 2 * kmax; ++j) {
    if (j > 0) e = e.apply_H();
    const double h = evaluate_on_orbit(e, re_q, ys);
    if (std::abs(h) > orbit_tolerance(e, re_norm, ys)) {
      if (j % 2 == 0 && h > 0.0) return j / 2;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<int> k0_dynamic(const QuadraticSymbol& q, int sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw InputError("k0_dynamic: sample_count must be >= 1");
  const int dim = q.dim();
  const int kmax = 2 * (dim - 1);

  // Nested strata on which the lower brackets vanish identically.
  std::vector<Mat> strata;
  Mat B = Mat::Identity(dim, dim);
  BracketExpansion e;
  for (int k = 0; k <= kmax && B.cols() > 0; ++k) {
    if (k > 0) e = e.apply_H().apply_H();
    const Mat M = bracket_form_matrix(e, q);
    const Mat Z = B * psd_kernel(B.transpose() * M * B, 1e-10, 1e-12 * spectral_norm(M));
    if (Z.cols() == B.cols()) break;  // stable: the remaining stratum is singular
    B = Z;
    if (B.cols() > 0) strata.push_back(B);
  }

  SphereSampler sampler(seed);
  const int pools = 1 + static_cast<int>(strata.size());
  int worst = 0;
  for (int i = 0; i < sample_count; ++i) {
    const int pool = i % pools;
    const Vec X = pool == 0 ? sampler.unit(dim) : sampler.unit_in(strata[pool - 1]);
    const auto order = finite_type_order(q, X, kmax);
    if (!order) return std::nullopt;
    worst = std::max(worst, *order);
  }
  return worst;
}

}  // namespace quadsym
