#pragma once

// Phase-space algebra for complex quadratic symbols on R^{2n}.
//
// Coordinates are ordered (x_1..x_n, xi_1..xi_n). The symplectic form is
// sigma((x,xi),(y,eta)) = xi.y - x.eta, i.e. sigma(X,Y) = X^T J Y with
// J = [[0,-I],[I,0]].

#include "quadsym/types.hpp"

#include <cstdint>
#include <vector>

namespace quadsym {

/// Outcome of the Re q >= 0 test.
enum class SignStatus { ok, borderline, negative };

struct SignCheck {
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;
  SignStatus status = SignStatus::ok;
};

/// q(X) = X^T Q X with Q complex symmetric of size 2n.
///
/// Construction symmetrizes Q; it does not demand Re q >= 0 because brackets
/// and differences of symbols are quadratic forms of no particular sign. Use
/// check_accretive / require_accretive where the sign matters.
class QuadraticSymbol {
 public:
  QuadraticSymbol() = default;
  explicit QuadraticSymbol(const CMat& coefficients);
  QuadraticSymbol(const Mat& re, const Mat& im);

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  const CMat& matrix() const { return Q_; }
  Mat re() const { return Q_.real(); }
  Mat im() const { return Q_.imag(); }

  QuadraticSymbol real_part() const;
  QuadraticSymbol imag_part() const;  // the real form Im q, stored with zero imaginary part

  /// Operator 2-norm of Q (largest singular value).
  double norm() const;

 private:
  int n_ = 0;
  CMat Q_;
};

/// Smallest eigenvalue of Re Q compared with tol_psd = 1e-10 * ||Re Q||.
/// Slightly negative spectra (within the tolerance, beyond rounding) are flagged borderline.
SignCheck check_accretive(const QuadraticSymbol& q, double rel_tol = 1e-10);

/// Throws InputError when Re q has a negative direction beyond tolerance.
SignCheck require_accretive(const QuadraticSymbol& q, double rel_tol = 1e-10);

/// The matrix J of sigma, [[0,-I],[I,0]].
Mat symplectic_matrix(int n);

double sigma(const Vec& X, const Vec& Y);
cplx sigma(const CVec& X, const CVec& Y);

cplx evaluate(const QuadraticSymbol& q, const Vec& X);
cplx polarized(const QuadraticSymbol& q, const Vec& X, const Vec& Y);

/// F with sigma(X, F Y) = q(X;Y). Re F and Im F are the Hamilton maps of Re q and Im q.
struct HamiltonMap {
  CMat F;
  Mat re() const { return F.real(); }
  Mat im() const { return F.imag(); }
};

HamiltonMap hamilton_map(const QuadraticSymbol& q);

/// Inverse of hamilton_map: the symbol whose Hamilton map is F.
QuadraticSymbol symbol_from_hamilton_map(const CMat& F);

/// exp(2 t ImF) X, the integral curve of H_{Im q} through X.
Vec hamilton_flow(const Mat& im_f, double t, const Vec& X);

/// (1/2T) int_{-T}^{T} Re q(exp(t H_{Im q}) X) dt by Gauss-Legendre quadrature.
double average_real_part(const QuadraticSymbol& q, double T, const Vec& X, int order = 64);

/// The quadratic form H_a b = d_xi a . d_x b - d_x a . d_xi b, whose Hamilton map is -2[F_a, F_b].
QuadraticSymbol poisson_bracket_quadratic(const QuadraticSymbol& a, const QuadraticSymbol& b);

/// Seeded values of q on the unit sphere; they generate the numerical range cone.
std::vector<cplx> numerical_range_samples(const QuadraticSymbol& q, int count, std::uint64_t seed);

/// Real symplectic change of variables: the symbol X -> q(P X).
QuadraticSymbol conjugate(const QuadraticSymbol& q, const Mat& P);

}  // namespace quadsym
