#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadsym/symplectic.hpp"
#include "test_support.hpp"

using namespace quadsym;
using namespace testing;

TEST_CASE("symbol construction symmetrizes and validates") {
  Mat re(2, 2);
  re << 1, 2, 0, 1;
  const QuadraticSymbol q(re, Mat::Zero(2, 2));
  CHECK(q.re()(0, 1) == doctest::Approx(1.0));
  CHECK(q.re()(1, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(QuadraticSymbol(Mat::Identity(3, 3), Mat::Zero(3, 3)), InputError);
  CHECK_THROWS_AS(QuadraticSymbol(Mat::Identity(2, 2), Mat::Zero(4, 4)), InputError);
  Mat bad = Mat::Identity(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(QuadraticSymbol(bad, Mat::Zero(2, 2)), InputError);
}

TEST_CASE("accretivity check") {
  CHECK(check_accretive(harmonic()).status == SignStatus::ok);
  CHECK(check_accretive(fokker_planck()).status == SignStatus::ok);
  Mat re = Mat::Identity(2, 2);
  re(1, 1) = -0.5;
  const QuadraticSymbol neg(re, Mat::Zero(2, 2));
  CHECK(check_accretive(neg).status == SignStatus::negative);
  CHECK_THROWS_AS(require_accretive(neg), InputError);
  re(1, 1) = -1e-12;
  CHECK(check_accretive(QuadraticSymbol(re, Mat::Zero(2, 2))).status == SignStatus::borderline);
}

TEST_CASE("evaluate") {
  CHECK(std::abs(evaluate(harmonic(), Vec::Unit(2, 0)) - 1.0) < 1e-15);
  Vec X(4);
  X << 0, 2, 0, 0;
  CHECK(std::abs(evaluate(fokker_planck(), X) - 1.0) < 1e-15);
  Rng rng(3);
  const QuadraticSymbol q = random_symbol(rng, 3);
  CHECK(std::abs(evaluate(q, Vec::Zero(6))) == 0.0);
  // Direct formula eta^2 + v^2/4 + i(v xi - x eta).
  for (int k = 0; k < 20; ++k) {
    const Vec Y = rng.vec(4);
    const cplx expect(Y(3) * Y(3) + Y(1) * Y(1) / 4, Y(1) * Y(2) - Y(0) * Y(3));
    CHECK(std::abs(evaluate(fokker_planck(), Y) - expect) < 1e-13);
  }
  CHECK_THROWS_AS(evaluate(q, Vec::Zero(4)), InputError);
}

TEST_CASE("polarized form") {
  Rng rng(5);
  const QuadraticSymbol q = random_symbol(rng, 2);
  const Vec X = rng.vec(4), Y = rng.vec(4);
  CHECK(std::abs(polarized(q, X, X) - evaluate(q, X)) < 1e-13);
  CHECK(std::abs(polarized(harmonic(), Vec::Unit(2, 0), Vec::Unit(2, 1))) == 0.0);
  // (q(X+Y) - q(X) - q(Y)) / 2 by monomial expansion.
  const cplx oracle = (eval_oracle(q, X + Y) - eval_oracle(q, X) - eval_oracle(q, Y)) / 2.0;
  CHECK(std::abs(polarized(q, X, Y) - oracle) < 1e-12);
  // FP: e_eta against e_v has no coefficient in any monomial of q.
  CHECK(std::abs(polarized(fokker_planck(), Vec::Unit(4, 3), Vec::Unit(4, 1))) == 0.0);
  // FP: e_x against e_eta picks the -i x eta term.
  const cplx xe = polarized(fokker_planck(), Vec::Unit(4, 0), Vec::Unit(4, 3));
  CHECK(std::abs(xe - cplx(0, -0.5)) < 1e-15);
}

TEST_CASE("Hamilton map of the Fokker-Planck symbol") {
  for (double a : {1.0, 0.3, -2.0}) {
    const CMat F = hamilton_map(fokker_planck(a)).F;
    const cplx I(0, 1);
    CMat expect(4, 4);
    expect << 0, I / 2.0, 0, 0,
              -a * I / 2.0, 0, 0, 1,
              0, 0, 0, a * I / 2.0,
              0, -0.25, -I / 2.0, 0;
    CHECK((F - expect).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("Hamilton map small cases") {
  Mat expect(2, 2);
  expect << 0, 1, -1, 0;
  CHECK((hamilton_map(harmonic()).F - expect.cast<cplx>()).norm() < 1e-15);
  CHECK(hamilton_map(QuadraticSymbol(Mat::Zero(4, 4), Mat::Zero(4, 4))).F.norm() == 0.0);
}

TEST_CASE("Hamilton map properties on random symbols") {
  Rng rng(11);
  for (int t = 0; t < 40; ++t) {
    const int n = rng.integer(1, 4);
    const QuadraticSymbol q(CMat(rng.sym(2 * n).cast<cplx>() + cplx(0, 1) * rng.sym(2 * n).cast<cplx>()));
    const CMat F = hamilton_map(q).F;
    const Vec X = rng.vec(2 * n), Y = rng.vec(2 * n);
    const double scale = 1e-12 * (1.0 + X.norm() * Y.norm() * q.norm());
    const CVec FY = F * Y.cast<cplx>(), FX = F * X.cast<cplx>();
    CHECK(std::abs(sigma(X.cast<cplx>(), FY) - polarized(q, X, Y)) <= scale);
    CHECK(std::abs(sigma(FX, Y.cast<cplx>()) + sigma(X.cast<cplx>(), FY)) <= scale);
    CHECK((hamilton_map(q.real_part()).F.real() - F.real()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((hamilton_map(q.imag_part()).F.real() - F.imag()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((symbol_from_hamilton_map(F).matrix() - q.matrix()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("Hamilton flow") {
  Rng rng(13);
  const Vec X = rng.vec(4);
  CHECK((hamilton_flow(hamilton_map(fokker_planck()).im(), 0.0, X) - X).norm() == 0.0);

  // Im q = x xi: x' = x, xi' = -xi.
  Mat im(2, 2);
  im << 0, 0.5, 0.5, 0;
  const QuadraticSymbol xxi(Mat::Zero(2, 2), im);
  Vec Y(2);
  Y << 0.7, -1.3;
  for (double t : {-1.0, 0.5, 2.0}) {
    const Vec Z = hamilton_flow(hamilton_map(xxi).im(), t, Y);
    CHECK(Z(0) == doctest::Approx(std::exp(t) * 0.7).epsilon(1e-13));
    CHECK(Z(1) == doctest::Approx(-std::exp(-t) * 1.3).epsilon(1e-13));
  }

  for (int k = 0; k < 20; ++k) {
    const int n = rng.integer(1, 3);
    const QuadraticSymbol q = random_symbol(rng, n);
    const Mat imF = hamilton_map(q).im();
    const Vec X0 = rng.vec(2 * n);
    const double t = rng.uniform(-1.0, 1.0);
    const Vec ode = dopri_linear(2.0 * imF, X0, t);
    CHECK((hamilton_flow(imF, t, X0) - ode).norm() <= 1e-8 * ode.norm());
  }
}

TEST_CASE("flow of a real symbol is symplectic") {
  Rng rng(17);
  for (int k = 0; k < 20; ++k) {
    const int n = rng.integer(1, 4);
    const QuadraticSymbol q(rng.sym(2 * n), Mat::Zero(2 * n, 2 * n));
    const Mat F = hamilton_map(q).re();
    const double t = rng.uniform(-0.5, 0.5);
    Mat E(2 * n, 2 * n);
    for (int j = 0; j < 2 * n; ++j) E.col(j) = hamilton_flow(F, t, Vec::Unit(2 * n, j));
    CHECK((E.transpose() * J(n) * E - J(n)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("average of Re q along the flow") {
  Rng rng(19);
  // Positive definite Re q.
  const QuadraticSymbol q(Mat(Mat::Identity(4, 4) * 2.0), rng.sym(4));
  const Vec X = rng.vec(4);
  const Mat imF = hamilton_map(q).im();
  double min_flow = 1e300;
  for (int k = -100; k <= 100; ++k) min_flow = std::min(min_flow, hamilton_flow(imF, k / 100.0, X).squaredNorm());
  CHECK(average_real_part(q, 1.0, X) >= 2.0 * min_flow * (1 - 1e-6));

  // xi^2 + i x xi at (1, 0): the flow stays on the x-axis.
  CHECK(std::abs(average_real_part(degenerate_symbol(), 1.0, Vec::Unit(2, 0))) <= 1e-14);

  // Closed form at (0, 1): xi(t) = e^{-t}, (1/2T) int e^{-2t} dt = sinh(2T)/(2T).
  for (double T : {0.5, 1.0, 2.0}) {
    CHECK(average_real_part(degenerate_symbol(), T, Vec::Unit(2, 1)) ==
          doctest::Approx(std::sinh(2 * T) / (2 * T)).epsilon(1e-12));
  }

  for (int k = 0; k < 20; ++k) CHECK(average_real_part(fokker_planck(), 1.0, rng.vec(4)) > 0.0);
  CHECK_THROWS_AS(average_real_part(fokker_planck(), 0.0, X), InputError);
}

TEST_CASE("quadratic Poisson bracket") {
  Rng rng(23);
  const QuadraticSymbol a = random_symbol(rng, 2);
  CHECK(poisson_bracket_quadratic(a, a).matrix().norm() <= 1e-14);

  Mat xxi(2, 2), xi2(2, 2);
  xxi << 0, 0.5, 0.5, 0;
  xi2 << 0, 0, 0, 1;
  const QuadraticSymbol A(xxi, Mat::Zero(2, 2)), B(xi2, Mat::Zero(2, 2));
  Mat expect = Mat::Zero(2, 2);
  expect(1, 1) = -2.0;
  CHECK((poisson_bracket_quadratic(A, B).re() - expect).norm() <= 1e-15);

  // Partial-derivative oracle: grad a = 2 A X.
  for (int k = 0; k < 20; ++k) {
    const int n = rng.integer(1, 3);
    const QuadraticSymbol p(rng.sym(2 * n), rng.sym(2 * n)), r(rng.sym(2 * n), rng.sym(2 * n));
    const Vec X = rng.vec(2 * n);
    const CVec gp = 2.0 * p.matrix() * X.cast<cplx>(), gr = 2.0 * r.matrix() * X.cast<cplx>();
    cplx direct = 0.0;
    for (int i = 0; i < n; ++i) direct += gp(n + i) * gr(i) - gp(i) * gr(n + i);
    CHECK(std::abs(evaluate(poisson_bracket_quadratic(p, r), X) - direct) <= 1e-12 * (1 + std::abs(direct)));
  }

  // H_{Im q} Re q = 4 Re q(X; ImF X).
  for (int k = 0; k < 20; ++k) {
    const QuadraticSymbol q = random_symbol(rng, 2);
    const Vec X = rng.vec(4);
    const Vec ImFX = hamilton_map(q).im() * X;
    const double lhs = evaluate(poisson_bracket_quadratic(q.imag_part(), q.real_part()), X).real();
    const double rhs = 4.0 * polarized(q.real_part(), X, ImFX).real();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST_CASE("numerical range samples") {
  for (const cplx z : numerical_range_samples(harmonic(), 50, 1)) CHECK(std::abs(z - 1.0) < 1e-14);
  for (const cplx z : numerical_range_samples(fokker_planck(), 200, 2)) CHECK(z.real() >= 0.0);
  Mat xi2 = Mat::Zero(2, 2);
  xi2(1, 1) = 1.0;
  for (const cplx z : numerical_range_samples(QuadraticSymbol(Mat::Zero(2, 2), xi2), 50, 3)) {
    CHECK(z.real() == 0.0);
    CHECK(z.imag() >= 0.0);
  }
  CHECK(numerical_range_samples(fokker_planck(), 10, 7) == numerical_range_samples(fokker_planck(), 10, 7));
  CHECK_THROWS_AS(numerical_range_samples(fokker_planck(), 0, 7), InputError);
}

TEST_CASE("conjugation by symplectic matrices") {
  Rng rng(29);
  const Mat P = random_symplectic(rng, 2);
  CHECK((P.transpose() * J(2) * P - J(2)).cwiseAbs().maxCoeff() <= 1e-11);
  const QuadraticSymbol q = random_symbol(rng, 2);
  const QuadraticSymbol c = conjugate(q, P);
  const Vec Y = rng.vec(4);
  CHECK(std::abs(evaluate(c, Y) - evaluate(q, P * Y)) <= 1e-11 * (1 + std::abs(evaluate(c, Y))));
}
