// Text form of polynomials: canonical printer and recursive-descent parser.
#include <cctype>
#include <limits>

#include "webflat/mpoly.hpp"

namespace webflat::poly {

namespace {

std::string monomial_text(const Monomial& m, const VarList& vars) {
  std::string s;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    int e = m.exponent(static_cast<int>(v));
    if (e == 0) continue;
    if (!s.empty()) s += '*';
    s += vars[v];
    if (e > 1) s += '^' + std::to_string(e);
  }
  return s;
}

std::string term_text(const Term& t, const VarList& vars) {
  std::string mono = monomial_text(t.mono, vars);
  const GaussRat& c = t.coef;
  if (mono.empty()) return c.to_string();
  if (c.is_one()) return mono;
  if (c == GaussRat(-1)) return "-" + mono;
  return c.to_string() + "*" + mono;
}

class Parser {
 public:
  Parser(std::string_view text, const VarList& vars) : text_(text), vars_(vars) {}

  MPoly run() {
    skip_ws();
    if (pos_ == text_.size()) fail("empty expression");
    MPoly p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MPoly expr() {
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    MPoly acc = term();
    if (negate) acc = -acc;
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MPoly term() {
    MPoly acc = factor();
    while (accept('*')) acc *= factor();
    return acc;
  }

  MPoly factor() {
    MPoly b = base();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      std::string digits(text_.substr(start, pos_ - start));
      if (digits.size() > 5 || std::stoul(digits) > 0xFFFFu) {
        pos_ = start;
        fail("exponent too large");
      }
      b = b.pow(static_cast<unsigned>(std::stoul(digits)));
    }
    return b;
  }

  MPoly base() {
    skip_ws();
    if (pos_ == text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MPoly inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      if (name == "i") return MPoly::constant(vars_, GaussRat::unit_i());
      for (const auto& v : vars_) {
        if (v == name) return MPoly::variable(vars_, name);
      }
      pos_ = start;
      fail("undeclared variable '" + name + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  MPoly number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      std::size_t den_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (den_start == pos_) fail("expected denominator");
    }
    std::string lit(text_.substr(start, pos_ - start));
    try {
      return MPoly::constant(vars_, GaussRat(parse_rat(lit)));
    } catch (const std::invalid_argument& e) {
      pos_ = start;
      fail(e.what());
    }
  }

  std::string_view text_;
  const VarList& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    std::string t = term_text(terms_[k], *vars_);
    if (k == 0) {
      out = t;
    } else if (t.front() == '-') {
      out += " - " + t.substr(1);
    } else {
      out += " + " + t;
    }
  }
  return out;
}

MPoly parse_poly(std::string_view text, const VarList& vars) {
  for (const auto& v : vars) {
    if (v == "i") throw std::invalid_argument("'i' is reserved for the imaginary unit");
  }
  return Parser(text, vars).run();
}

}  // namespace webflat::poly
