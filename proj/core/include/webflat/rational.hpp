// Exact scalars: rationals (GMP) and Gaussian rationals Q(i).
#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <string>

namespace webflat::poly {

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator (gmpxx canonicalizes after every arithmetic operation).
using Rat = mpq_class;

/// Parses "n" or "n/d"; the result is canonicalized. Throws std::invalid_argument.
Rat parse_rat(const std::string& text);

/// Element of Q(i). Field operations are exact.
class GaussRat {
 public:
  GaussRat() = default;
  GaussRat(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussRat(Rat re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT(google-explicit-constructor)
  GaussRat(Rat re, Rat im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussRat unit_i() { return {Rat(0), Rat(1)}; }

  const Rat& re() const { return re_; }
  const Rat& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussRat conj() const { return {re_, -im_}; }
  Rat norm() const { return re_ * re_ + im_ * im_; }
  /// Throws std::domain_error on zero.
  GaussRat inverse() const;

  GaussRat operator-() const { return {-re_, -im_}; }
  GaussRat& operator+=(const GaussRat& o);
  GaussRat& operator-=(const GaussRat& o);
  GaussRat& operator*=(const GaussRat& o);
  GaussRat& operator/=(const GaussRat& o);

  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  /// |re| + |im| as a double; cheap magnitude used for scaling decisions.
  double magnitude() const;

  /// Canonical text: "3/2", "-i", "2*i", "(1/2+3*i)". Parses back through the
  /// polynomial grammar.
  std::string to_string() const;
  /// True when to_string() needs no parentheses as a product factor.
  bool is_atomic_text() const { return is_real() || sgn(re_) == 0; }

  std::size_t hash() const;

 private:
  Rat re_{0};
  Rat im_{0};
};

/// Gaussian rational closest to z with denominator exactly `den` (rounded
/// componentwise). Used by root recognition; verification is the caller's job.
GaussRat round_to_denominator(std::complex<double> z, long den);

}  // namespace webflat::poly
