// Exact sparse multivariate polynomials over Q(i) in graded-lex order.
#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "webflat/rational.hpp"

namespace webflat::poly {

inline constexpr int kMaxVars = 8;

/// Exponent vector packed into 8 x 16-bit fields; variable 0 occupies the most
/// significant field so that comparing keys is lexicographic comparison.
class Monomial {
 public:
  using Key = unsigned __int128;

  Monomial() = default;
  static Monomial from_exponents(std::span<const int> exps);

  int exponent(int var) const { return static_cast<int>((key_ >> shift(var)) & 0xFFFFu); }
  void set_exponent(int var, int e);
  int degree() const { return degree_; }
  Key key() const { return key_; }

  bool divides(const Monomial& other) const;
  /// Multiplies; throws std::overflow_error when an exponent leaves 16 bits.
  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// Precondition: b divides a.
  friend Monomial operator/(const Monomial& a, const Monomial& b);

  /// Graded-lex order (total degree first, then lex on the declared order).
  friend bool operator<(const Monomial& a, const Monomial& b) {
    return a.degree_ != b.degree_ ? a.degree_ < b.degree_ : a.key_ < b.key_;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.key_ == b.key_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return a.key_ != b.key_; }

 private:
  static int shift(int var) { return (kMaxVars - 1 - var) * 16; }
  static Monomial from_key(Key k);
  Key key_ = 0;
  int degree_ = 0;
};

struct Term {
  Monomial mono;
  GaussRat coef;
};

using VarList = std::vector<std::string>;

/// Raised for malformed polynomial text; `position` is a 0-based byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Raised by exact division when the divisor does not divide.
class NotDivisible : public std::runtime_error {
 public:
  explicit NotDivisible(const std::string& remainder)
      : std::runtime_error("exact division failed: remainder nonzero (" + remainder + ")") {}
};

/// Result of a floating evaluation: value, an a-priori rounding error bound,
/// and the absolute-value scale sum |c||m| the bound is relative to.
struct EvalResult {
  std::complex<double> value;
  double error_bound = 0.0;
  double scale = 0.0;
};

/// A point for floating evaluation. Precision is 53 (double) or 106
/// (double-double); coordinates are always supplied as doubles.
struct CPoint {
  std::vector<std::complex<double>> coords;
  int precision_bits = 53;
};

/// Immutable-by-convention value type. Terms are stored sorted in descending
/// graded-lex order with no zero coefficients. Binary operations between
/// polynomials over different variable lists work over the union (left
/// operand's variables first).
class MPoly {
 public:
  MPoly() : vars_(empty_vars()) {}
  explicit MPoly(VarList vars);
  MPoly(VarList vars, std::vector<Term> terms);

  static MPoly constant(VarList vars, GaussRat c);
  static MPoly variable(VarList vars, std::string_view name);

  const VarList& vars() const { return *vars_; }
  int nvars() const { return static_cast<int>(vars_->size()); }
  /// Throws std::invalid_argument if the variable is not declared.
  int var_index(std::string_view name) const;
  bool has_var(std::string_view name) const;

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0); }
  GaussRat constant_value() const;

  int total_degree() const { return terms_.empty() ? -1 : terms_.front().mono.degree(); }
  int degree_in(int var) const;
  int degree_in(std::string_view name) const { return degree_in(var_index(name)); }
  /// Smallest exponent of `var` over all terms (0 for the zero polynomial).
  int min_degree_in(int var) const;
  bool is_homogeneous() const;

  const Term& leading_term() const { return terms_.front(); }
  const GaussRat& leading_coefficient() const { return terms_.front().coef; }

  /// Same polynomial over another variable list that contains all variables
  /// actually used; throws std::invalid_argument otherwise.
  MPoly with_vars(const VarList& vars) const;
  /// Drops variables that no term uses.
  MPoly trimmed() const;

  MPoly operator-() const;
  friend MPoly operator+(const MPoly& a, const MPoly& b);
  friend MPoly operator-(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const MPoly& a, const GaussRat& c);
  friend MPoly operator*(const GaussRat& c, const MPoly& a) { return a * c; }
  MPoly& operator+=(const MPoly& o) { return *this = *this + o; }
  MPoly& operator-=(const MPoly& o) { return *this = *this - o; }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
  MPoly pow(unsigned e) const;
  MPoly mul_monomial(const Monomial& m, const GaussRat& c) const;

  /// Equality as polynomials (variable lists may differ).
  friend bool operator==(const MPoly& a, const MPoly& b);
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  MPoly derivative(int var) const;
  MPoly derivative(std::string_view name) const { return derivative(var_index(name)); }

  /// Coefficients c_k with f = sum_k c_k var^k; each c_k keeps the variable
  /// list (with `var` absent). Empty for the zero polynomial.
  std::vector<MPoly> coefficients_in(int var) const;
  static MPoly from_coefficients(const VarList& vars, int var, const std::vector<MPoly>& coeffs);

  /// f with `name` replaced by `value`, by exact expansion.
  MPoly substitute(std::string_view name, const MPoly& value) const;
  /// Simultaneous substitution of every variable; images[i] replaces vars()[i].
  MPoly compose(const std::vector<MPoly>& images) const;

  /// Multiplies each term by z^(degree - deg(term)); adds z to the variables.
  /// Throws std::invalid_argument if degree < total degree.
  MPoly homogenize(std::string_view z, int degree) const;
  /// Sets z = 1 and removes z from the variable list.
  MPoly dehomogenize(std::string_view z) const;

  /// Exact value at a point of Q(i)^n (one entry per variable).
  GaussRat eval(std::span<const GaussRat> point) const;
  /// Partial evaluation: fixes variable `var` to `value`, keeping the list.
  MPoly eval_var(int var, const GaussRat& value) const;
  /// Floating evaluation with a running rounding-error bound.
  EvalResult eval_complex(const CPoint& point) const;

  /// Scales so that the leading coefficient is 1 (zero stays zero).
  MPoly monic() const;
  /// Canonical text under graded-lex order; parse_poly(to_string()) == *this.
  std::string to_string() const;

  std::size_t hash() const;

 private:
  static std::shared_ptr<const VarList> empty_vars();
  void normalize_terms();  // sort, merge duplicates, drop zeros

  std::shared_ptr<const VarList> vars_;
  std::vector<Term> terms_;

  friend class MPolyBuilder;
};

/// Parses the polynomial grammar
///   expr := ['+'|'-'] term (('+'|'-') term)*
///   term := factor ('*' factor)*
///   factor := base ('^' uint)?
///   base := var | rational | 'i' | '(' expr ')'
/// over the declared variables. Throws ParseError.
MPoly parse_poly(std::string_view text, const VarList& vars);

/// Quotient and remainder of multivariate division by a single divisor (graded-lex).
struct DivResult {
  MPoly quotient;
  MPoly remainder;
};
DivResult divide_with_remainder(const MPoly& f, const MPoly& g);
/// Throws NotDivisible when g does not divide f.
MPoly exact_divide(const MPoly& f, const MPoly& g);
std::optional<MPoly> try_divide(const MPoly& f, const MPoly& g);

/// Union of two variable lists preserving the order of `a` first.
VarList merge_vars(const VarList& a, const VarList& b);

}  // namespace webflat::poly
