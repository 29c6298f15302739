#include "webflat/rational.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace webflat::poly {

Rat parse_rat(const std::string& text) {
  Rat r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw std::invalid_argument("malformed rational literal '" + text + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

GaussRat GaussRat::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero in Q(i)");
  Rat n = norm();
  return {re_ / n, -im_ / n};
}

GaussRat& GaussRat::operator+=(const GaussRat& o) {
  re_ += o.re_;
  if (sgn(o.im_) != 0) im_ += o.im_;
  return *this;
}

GaussRat& GaussRat::operator-=(const GaussRat& o) {
  re_ -= o.re_;
  if (sgn(o.im_) != 0) im_ -= o.im_;
  return *this;
}

GaussRat& GaussRat::operator*=(const GaussRat& o) {
  // Real-only fast path; most coefficients in the families are real.
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  Rat re = re_ * o.re_ - im_ * o.im_;
  Rat im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussRat& GaussRat::operator/=(const GaussRat& o) {
  if (o.is_zero()) throw std::domain_error("division by zero in Q(i)");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    if (sgn(im_) != 0) im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

double GaussRat::magnitude() const { return std::abs(re_.get_d()) + std::abs(im_.get_d()); }

std::string GaussRat::to_string() const {
  const bool has_re = sgn(re_) != 0;
  const bool has_im = sgn(im_) != 0;
  if (!has_im) return re_.get_str();
  std::string im_part;
  if (im_ == 1) {
    im_part = "i";
  } else if (im_ == -1) {
    im_part = "-i";
  } else {
    im_part = im_.get_str() + "*i";
  }
  if (!has_re) return im_part;
  std::string s = "(" + re_.get_str();
  if (sgn(im_) > 0) s += "+";
  s += im_part + ")";
  return s;
}

std::size_t GaussRat::hash() const {
  std::hash<std::string> h;
  return h(re_.get_str()) * 31u + h(im_.get_str());
}

GaussRat round_to_denominator(std::complex<double> z, long den) {
  const double d = static_cast<double>(den);
  mpz_class nr(std::nearbyint(z.real() * d));
  mpz_class ni(std::nearbyint(z.imag() * d));
  Rat re(nr, mpz_class(den));
  Rat im(ni, mpz_class(den));
  re.canonicalize();
  im.canonicalize();
  return {re, im};
}

}  // namespace webflat::poly
