#include "quadsym/polynomial.hpp"

#include <cmath>
#include <sstream>

namespace quadsym {

Polynomial Polynomial::constant(int n, cplx c) {
  Polynomial p(n);
  p.add_term(Exponent(2 * n, 0), c);
  return p;
}

Polynomial Polynomial::variable(int n, int k) {
  if (k < 0 || k >= 2 * n) throw InputError("Polynomial::variable: index out of range");
  Exponent e(2 * n, 0);
  e[k] = 1;
  Polynomial p(n);
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::from_quadratic(const QuadraticSymbol& q) {
  const int d = q.dim();
  Polynomial p(q.n());
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      Exponent e(d, 0);
      ++e[a];
      ++e[b];
      p.add_term(e, a == b ? q.matrix()(a, a) : 2.0 * q.matrix()(a, b));
    }
  }
  return p;
}

void Polynomial::add_term(const Exponent& e, cplx c) {
  if (static_cast<int>(e.size()) != 2 * n_) throw InputError("Polynomial: exponent length mismatch");
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

cplx Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

bool Polynomial::is_homogeneous(int d) const {
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    if (s != d) return false;
  }
  return true;
}

cplx Polynomial::evaluate(const Vec& X) const {
  if (X.size() != 2 * n_) throw InputError("Polynomial::evaluate: dimension mismatch");
  cplx acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = 1.0;
    for (int k = 0; k < 2 * n_; ++k) m *= std::pow(X(k), e[k]);
    acc += c * m;
  }
  return acc;
}

void Polynomial::require_same(const Polynomial& o) const {
  if (n_ != o.n_) throw InputError("Polynomial: dimension mismatch");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  require_same(o);
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * cplx(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  require_same(o);
  Polynomial r(n_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponent e(2 * n_);
      for (int k = 0; k < 2 * n_; ++k) e[k] = ea[k] + eb[k];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator*(cplx c) const {
  Polynomial r(n_);
  for (const auto& [e, v] : terms_) r.add_term(e, v * c);
  return r;
}

Polynomial Polynomial::derivative(int k) const {
  if (k < 0 || k >= 2 * n_) throw InputError("Polynomial::derivative: index out of range");
  Polynomial r(n_);
  for (const auto& [e, c] : terms_) {
    if (e[k] == 0) continue;
    Exponent f = e;
    --f[k];
    r.add_term(f, c * static_cast<double>(e[k]));
  }
  return r;
}

Polynomial Polynomial::pruned(double tol) const {
  Polynomial r(n_);
  for (const auto& [e, c] : terms_) {
    if (std::abs(c) > tol) r.add_term(e, c);
  }
  return r;
}

QuadraticSymbol Polynomial::to_quadratic(double tol) const {
  const int d = 2 * n_;
  if (d == 0) throw InputError("Polynomial::to_quadratic: empty polynomial space");
  CMat Q = CMat::Zero(d, d);
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    if (s != 2) {
      if (std::abs(c) <= tol) continue;
      throw InputError("polynomial is not a homogeneous quadratic: term of degree " + std::to_string(s));
    }
    int a = -1, b = -1;
    for (int k = 0; k < d; ++k) {
      if (e[k] == 2) a = b = k;
      if (e[k] == 1) (a < 0 ? a : b) = k;
    }
    if (a == b) {
      Q(a, a) += c;
    } else {
      Q(a, b) += 0.5 * c;
      Q(b, a) += 0.5 * c;
    }
  }
  return QuadraticSymbol(Q);
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    for (int k = 0; k < 2 * n_; ++k) {
      if (e[k] == 0) continue;
      os << "*" << (k < n_ ? "x" : "xi") << (k % n_ + 1);
      if (e[k] > 1) os << "^" << e[k];
    }
  }
  return os.str();
}

Polynomial gradient_dot(const Polynomial& a, const Polynomial& b) {
  Polynomial r(a.n());
  for (int k = 0; k < 2 * a.n(); ++k) r = r + a.derivative(k) * b.derivative(k);
  return r;
}

Polynomial poisson_bracket(const Polynomial& a, const Polynomial& b) {
  const int n = a.n();
  Polynomial r(n);
  for (int k = 0; k < n; ++k) {
    r = r + a.derivative(n + k) * b.derivative(k) - a.derivative(k) * b.derivative(n + k);
  }
  return r;
}

Polynomial scale_momenta(const Polynomial& a, double lambda) {
  const int n = a.n();
  Polynomial r(n);
  for (const auto& [e, c] : a.terms()) {
    int s = 0;
    for (int k = n; k < 2 * n; ++k) s += e[k];
    r.add_term(e, c * std::pow(lambda, s));
  }
  return r;
}

}  // namespace quadsym
