#pragma once

// JSON symbol documents and the polynomial text form of a quadratic symbol.

#include "quadsym/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace quadsym {

struct SymbolDocument {
  int n = 0;
  Mat Q_re, Q_im;  // as given, before symmetrization
  std::string label;
  std::optional<std::string> polynomial;
  QuadraticSymbol symbol;
  SignCheck sign;
  std::vector<std::string> warnings;
};

/// Parses {"n":..,"Q_re":..,"Q_im":..,"label":..,"polynomial":..}. Matrices may be
/// nested rows or flat row-major arrays; Q_im defaults to zero. Either the
/// matrices or the polynomial must be present; when both are, they must agree
/// within 1e-12. Throws InputError with the offending field.
SymbolDocument parse_symbol(const std::string& text);

SymbolDocument load_symbol(const std::string& path);

/// Polynomial in x1..xn, xi1..xin, i, numbers, + - * ^ and parentheses.
/// n <= 0 infers n from the largest variable index.
Polynomial parse_polynomial(const std::string& text, int n = 0);

}  // namespace quadsym
