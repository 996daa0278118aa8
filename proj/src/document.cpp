#include "quadsym/document.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>

namespace quadsym {

namespace {

using json = nlohmann::json;

// --- polynomial text ---------------------------------------------------------

struct Token {
  enum Kind { number, var, imag, plus, minus, times, power, lparen, rparen, end } kind;
  double value = 0.0;
  int var_index = 0;  // 0-based coordinate, x_k -> k-1, xi_k -> n_max + k-1 resolved later
  bool is_xi = false;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t{Token::end};
    t.pos = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      try {
        t.value = std::stod(s.substr(i), &used);
      } catch (const std::exception&) {
        throw InputError("polynomial: bad number at offset " + std::to_string(i));
      }
      t.kind = Token::number;
      i += used;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
      const std::string word = s.substr(i, j - i);
      if (j < s.size() && s[j] == '_') ++j;
      std::size_t k = j;
      while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
      const std::string digits = s.substr(j, k - j);
      if (word == "i" && digits.empty()) {
        t.kind = Token::imag;
      } else if ((word == "x" || word == "xi") && !digits.empty()) {
        t.kind = Token::var;
        t.is_xi = word == "xi";
        t.var_index = std::stoi(digits);
        if (t.var_index < 1) throw InputError("polynomial: variable index must be >= 1 at offset " + std::to_string(i));
      } else {
        throw InputError("polynomial: unknown symbol '" + s.substr(i, k - i) + "' at offset " + std::to_string(i));
      }
      i = k;
    } else {
      switch (c) {
        case '+': t.kind = Token::plus; break;
        case '-': t.kind = Token::minus; break;
        case '*': t.kind = Token::times; break;
        case '^': t.kind = Token::power; break;
        case '(': t.kind = Token::lparen; break;
        case ')': t.kind = Token::rparen; break;
        default: throw InputError(std::string("polynomial: unexpected '") + c + "' at offset " + std::to_string(i));
      }
      ++i;
    }
    out.push_back(t);
  }
  Token e{Token::end};
  e.pos = s.size();
  out.push_back(e);
  return out;
}

class PolyParser {
 public:
  PolyParser(std::vector<Token> toks, int n) : toks_(std::move(toks)), n_(n) {}

  Polynomial parse() {
    Polynomial p = expr();
    if (peek().kind != Token::end) fail("unexpected trailing input");
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("polynomial: " + what + " at offset " + std::to_string(peek().pos));
  }

  Polynomial expr() {
    Polynomial p = term();
    while (peek().kind == Token::plus || peek().kind == Token::minus) {
      const bool minus = next().kind == Token::minus;
      Polynomial t = term();
      p = minus ? p - t : p + t;
    }
    return p;
  }

  bool starts_factor(Token::Kind k) const {
    return k == Token::number || k == Token::var || k == Token::imag || k == Token::lparen;
  }

  Polynomial term() {
    Polynomial p = unary();
    while (true) {
      if (peek().kind == Token::times) {
        next();
        p = p * unary();
      } else if (starts_factor(peek().kind)) {
        p = p * unary();  // implicit product, e.g. "2 x1 xi1"
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    if (peek().kind == Token::minus) {
      next();
      return unary() * cplx(-1.0);
    }
    if (peek().kind == Token::plus) {
      next();
      return unary();
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (peek().kind != Token::power) return base;
    next();
    const Token& e = next();
    if (e.kind != Token::number || e.value != std::floor(e.value) || e.value < 0 || e.value > 16) {
      fail("exponent must be a small non-negative integer");
    }
    Polynomial r = Polynomial::constant(n_, 1.0);
    for (int k = 0; k < static_cast<int>(e.value); ++k) r = r * base;
    return r;
  }

  Polynomial primary() {
    const Token& t = next();
    switch (t.kind) {
      case Token::number: return Polynomial::constant(n_, t.value);
      case Token::imag: return Polynomial::constant(n_, cplx(0.0, 1.0));
      case Token::var: {
        if (t.var_index > n_) {
          throw InputError("polynomial: variable index " + std::to_string(t.var_index) + " exceeds n = " +
                           std::to_string(n_) + " at offset " + std::to_string(t.pos));
        }
        return Polynomial::variable(n_, (t.is_xi ? n_ : 0) + t.var_index - 1);
      }
      case Token::lparen: {
        Polynomial p = expr();
        if (next().kind != Token::rparen) {
          --pos_;
          fail("expected ')'");
        }
        return p;
      }
      default:
        --pos_;
        fail("expected a number, variable or '('");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int n_;
};

// --- matrices ----------------------------------------------------------------

Mat read_matrix(const json& j, const char* field, int dim) {
  const std::string where = std::string("field '") + field + "'";
  if (!j.is_array()) throw InputError(where + ": expected an array");
  Mat M(dim, dim);
  auto number = [&](const json& v, int r, int c) {
    if (!v.is_number()) {
      throw InputError(where + ": entry (" + std::to_string(r) + "," + std::to_string(c) + ") is not a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError(where + ": non-finite entry");
    return x;
  };
  if (!j.empty() && j[0].is_array()) {
    if (static_cast<int>(j.size()) != dim) throw InputError(where + ": expected " + std::to_string(dim) + " rows");
    for (int r = 0; r < dim; ++r) {
      if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim) {
        throw InputError(where + ": row " + std::to_string(r) + " must have " + std::to_string(dim) + " entries");
      }
      for (int c = 0; c < dim; ++c) M(r, c) = number(j[r][c], r, c);
    }
  } else {
    if (static_cast<int>(j.size()) != dim * dim) {
      throw InputError(where + ": expected " + std::to_string(dim * dim) + " row-major entries");
    }
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) M(r, c) = number(j[r * dim + c], r, c);
    }
  }
  return M;
}

void check_symmetric(const Mat& M, const char* field) {
  const double tol = 1e-10 * std::max(1.0, M.cwiseAbs().maxCoeff());
  for (int r = 0; r < M.rows(); ++r) {
    for (int c = r + 1; c < M.cols(); ++c) {
      if (std::abs(M(r, c) - M(c, r)) > tol) {
        throw InputError(std::string("field '") + field + "': not symmetric at (" + std::to_string(r) + "," +
                         std::to_string(c) + ")");
      }
    }
  }
}

int max_variable_index(const std::string& text) {
  int m = 0;
  for (const Token& t : tokenize(text)) {
    if (t.kind == Token::var) m = std::max(m, t.var_index);
  }
  return m;
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, int n) {
  if (n <= 0) n = max_variable_index(text);
  if (n <= 0) throw InputError("polynomial: no variables, cannot infer n");
  return PolyParser(tokenize(text), n).parse();
}

SymbolDocument parse_symbol(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("symbol document must be a JSON object");

  SymbolDocument doc;
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw InputError("field 'label': expected a string");
    doc.label = j["label"].get<std::string>();
  }
  if (j.contains("polynomial")) {
    if (!j["polynomial"].is_string()) throw InputError("field 'polynomial': expected a string");
    doc.polynomial = j["polynomial"].get<std::string>();
  }
  const bool has_matrices = j.contains("Q_re") || j.contains("Q_im");
  if (!has_matrices && !doc.polynomial) throw InputError("document needs Q_re/Q_im or a polynomial");

  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<int>() < 1) throw InputError("field 'n': expected a positive integer");
    doc.n = j["n"].get<int>();
  } else if (doc.polynomial) {
    doc.n = max_variable_index(*doc.polynomial);
  } else {
    throw InputError("field 'n' is required with matrix input");
  }
  const int dim = 2 * doc.n;

  std::optional<QuadraticSymbol> from_poly;
  if (doc.polynomial) {
    const Polynomial p = parse_polynomial(*doc.polynomial, doc.n);
    if (!p.is_homogeneous(2)) throw InputError("field 'polynomial': not a homogeneous quadratic");
    from_poly = p.to_quadratic();
    // The symbol must reproduce the polynomial coefficient by coefficient.
    const Polynomial back = Polynomial::from_quadratic(*from_poly);
    for (const auto& [e, c] : (back - p).terms()) {
      if (std::abs(c) > 1e-12) throw InputError("field 'polynomial': does not round-trip through Q");
    }
  }

  if (has_matrices) {
    doc.Q_re = j.contains("Q_re") ? read_matrix(j["Q_re"], "Q_re", dim) : Mat::Zero(dim, dim);
    doc.Q_im = j.contains("Q_im") ? read_matrix(j["Q_im"], "Q_im", dim) : Mat::Zero(dim, dim);
    check_symmetric(doc.Q_re, "Q_re");
    check_symmetric(doc.Q_im, "Q_im");
    doc.symbol = QuadraticSymbol(doc.Q_re, doc.Q_im);
    if (from_poly) {
      const double diff = (from_poly->matrix() - doc.symbol.matrix()).cwiseAbs().maxCoeff();
      if (diff > 1e-12) throw InputError("fields 'polynomial' and 'Q_re'/'Q_im' disagree (max diff " + std::to_string(diff) + ")");
    }
  } else {
    doc.symbol = *from_poly;
    doc.Q_re = doc.symbol.re();
    doc.Q_im = doc.symbol.im();
  }

  doc.sign = require_accretive(doc.symbol);
  if (doc.sign.status == SignStatus::borderline) {
    doc.warnings.push_back("Re q is borderline: smallest eigenvalue " + std::to_string(doc.sign.min_eigenvalue));
  }
  return doc;
}

SymbolDocument load_symbol(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_symbol(ss.str());
}

}  // namespace quadsym
