// Floating-point substrate: double-double reals, a complex template usable
// with both precisions, and the simultaneous (Aberth-Ehrlich) root finder.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "webflat/rational.hpp"

namespace webflat::num {

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2; roughly 106 mantissa bits.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h) {}  // NOLINT(google-explicit-constructor)
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi + lo; }
};

namespace detail {
inline DoubleDouble quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}
inline DoubleDouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}
inline DoubleDouble two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}
}  // namespace detail

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = detail::two_sum(a.hi, b.hi);
  DoubleDouble t = detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return detail::quick_two_sum(s.hi, s.lo);
}
inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }
inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return detail::quick_two_sum(p.hi, p.lo);
}
inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  double q1 = a.hi / b.hi;
  DoubleDouble r = a - b * DoubleDouble(q1);
  double q2 = r.hi / b.hi;
  r = r - b * DoubleDouble(q2);
  double q3 = r.hi / b.hi;
  return detail::quick_two_sum(q1, q2) + DoubleDouble(q3);
}
inline DoubleDouble& operator+=(DoubleDouble& a, DoubleDouble b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, DoubleDouble b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, DoubleDouble b) { return a = a * b; }
inline DoubleDouble& operator/=(DoubleDouble& a, DoubleDouble b) { return a = a / b; }
inline bool operator<(DoubleDouble a, DoubleDouble b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(DoubleDouble a, DoubleDouble b) { return b < a; }
inline bool operator==(DoubleDouble a, DoubleDouble b) { return a.hi == b.hi && a.lo == b.lo; }

inline DoubleDouble sqrt(DoubleDouble a) {
  if (a.hi <= 0.0) return {0.0, 0.0};
  double r = std::sqrt(a.hi);
  DoubleDouble rr(r);
  return rr + (a - rr * rr) / DoubleDouble(2.0 * r);
}
inline DoubleDouble abs(DoubleDouble a) { return a.hi < 0.0 ? -a : a; }

/// Per-precision helpers so templates can convert in and out uniformly.
template <class T>
struct Real;

template <>
struct Real<double> {
  static constexpr int bits = 53;
  static double from_rat(const poly::Rat& r) { return r.get_d(); }
  static double from_double(double v) { return v; }
  static double to_double(double v) { return v; }
  static double sqrt(double v) { return std::sqrt(v); }
  static double abs(double v) { return std::abs(v); }
  static constexpr double unit_roundoff() { return 0x1p-53; }
};

template <>
struct Real<DoubleDouble> {
  static constexpr int bits = 106;
  static DoubleDouble from_rat(const poly::Rat& r) {
    double hi = r.get_d();
    poly::Rat rest = r - poly::Rat(hi);
    return detail::quick_two_sum(hi, rest.get_d());
  }
  static DoubleDouble from_double(double v) { return {v, 0.0}; }
  static double to_double(DoubleDouble v) { return v.hi + v.lo; }
  static DoubleDouble sqrt(DoubleDouble v) { return num::sqrt(v); }
  static DoubleDouble abs(DoubleDouble v) { return num::abs(v); }
  static constexpr double unit_roundoff() { return 0x1p-104; }
};

/// Minimal complex number over T in {double, DoubleDouble}.
template <class T>
struct Cx {
  T re{};
  T im{};

  constexpr Cx() = default;
  constexpr Cx(T r) : re(r) {}  // NOLINT(google-explicit-constructor)
  constexpr Cx(T r, T i) : re(r), im(i) {}
  static Cx from(std::complex<double> z) {
    return {Real<T>::from_double(z.real()), Real<T>::from_double(z.imag())};
  }
  static Cx from(const poly::GaussRat& g) {
    return {Real<T>::from_rat(g.re()), Real<T>::from_rat(g.im())};
  }
  std::complex<double> to_std() const {
    return {Real<T>::to_double(re), Real<T>::to_double(im)};
  }

  friend Cx operator+(Cx a, Cx b) { return {a.re + b.re, a.im + b.im}; }
  friend Cx operator-(Cx a, Cx b) { return {a.re - b.re, a.im - b.im}; }
  friend Cx operator-(Cx a) { return {-a.re, -a.im}; }
  friend Cx operator*(Cx a, Cx b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cx operator/(Cx a, Cx b) {
    // Scale by the larger component to avoid overflow in the norm.
    double sr = std::abs(Real<T>::to_double(b.re));
    double si = std::abs(Real<T>::to_double(b.im));
    T s = Real<T>::from_double(std::max(sr, si) > 0.0 ? std::max(sr, si) : 1.0);
    Cx bs{b.re / s, b.im / s};
    T den = bs.re * bs.re + bs.im * bs.im;
    Cx num = a * Cx{bs.re, -bs.im};
    return {num.re / den / s, num.im / den / s};
  }
  Cx& operator+=(Cx b) { return *this = *this + b; }
  Cx& operator-=(Cx b) { return *this = *this - b; }
  Cx& operator*=(Cx b) { return *this = *this * b; }
  Cx& operator/=(Cx b) { return *this = *this / b; }
};

template <class T>
double magnitude(const Cx<T>& z) {
  return std::hypot(Real<T>::to_double(z.re), Real<T>::to_double(z.im));
}

/// Horner evaluation of a dense polynomial (coefficients low to high).
template <class T>
Cx<T> horner(const std::vector<Cx<T>>& coeffs, Cx<T> z) {
  Cx<T> acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

/// Sum of |c_k| |z|^k, the natural scale for residuals of a polynomial value.
template <class T>
double abs_scale(const std::vector<Cx<T>>& coeffs, Cx<T> z) {
  double r = magnitude(z);
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + magnitude(*it);
  return acc;
}

struct RootSolveInfo {
  int iterations = 0;
  bool converged = false;
};

/// All roots of a dense polynomial by Aberth-Ehrlich simultaneous iteration.
/// Initial guesses sit on a ring whose angular offset is drawn from `seed`, so
/// results are reproducible. The leading coefficient must be nonzero.
template <class T>
std::vector<Cx<T>> aberth_roots(const std::vector<Cx<T>>& coeffs, std::uint64_t seed,
                                RootSolveInfo* info = nullptr, int max_iter = 600) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  std::vector<Cx<T>> roots;
  if (n < 1) return roots;
  std::vector<Cx<T>> deriv(n);
  for (int k = 1; k <= n; ++k) deriv[k - 1] = coeffs[k] * Cx<T>(Real<T>::from_double(k));

  // Fujiwara-type radius for the initial ring.
  const double lead = magnitude(coeffs[n]);
  double radius = 0.0;
  for (int k = 1; k <= n; ++k) {
    double c = magnitude(coeffs[n - k]) / lead;
    if (c > 0.0) radius = std::max(radius, std::pow(c, 1.0 / k));
  }
  if (radius == 0.0) radius = 1.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double offset = unif(rng) * 2.0 * std::numbers::pi / n + 0.4;
  roots.reserve(n);
  for (int k = 0; k < n; ++k) {
    double ang = 2.0 * std::numbers::pi * k / n + offset;
    double rad = radius * (0.5 + 0.5 * unif(rng));
    roots.push_back(Cx<T>::from(std::polar(rad, ang)));
  }

  const double tol = Real<T>::unit_roundoff() * 8.0;
  int it = 0;
  bool done = false;
  for (; it < max_iter && !done; ++it) {
    done = true;
    for (int k = 0; k < n; ++k) {
      Cx<T> z = roots[k];
      Cx<T> p = horner(coeffs, z);
      if (magnitude(p) == 0.0) continue;
      Cx<T> dp = horner(deriv, z);
      Cx<T> ratio = p / dp;
      Cx<T> sum{};
      for (int j = 0; j < n; ++j) {
        if (j != k) sum += Cx<T>(Real<T>::from_double(1.0)) / (z - roots[j]);
      }
      Cx<T> w = ratio / (Cx<T>(Real<T>::from_double(1.0)) - ratio * sum);
      roots[k] = z - w;
      if (magnitude(w) > tol * std::max(1.0, magnitude(roots[k]))) done = false;
    }
  }
  if (info != nullptr) {
    info->iterations = it;
    info->converged = done;
  }
  return roots;
}

/// One Newton step count-limited polish; returns the refined root.
template <class T>
Cx<T> newton_polish(const std::vector<Cx<T>>& coeffs, Cx<T> z, int steps = 3) {
  std::vector<Cx<T>> deriv(coeffs.size() > 1 ? coeffs.size() - 1 : 0);
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    deriv[k - 1] = coeffs[k] * Cx<T>(Real<T>::from_double(static_cast<double>(k)));
  for (int s = 0; s < steps; ++s) {
    Cx<T> dp = horner(deriv, z);
    if (magnitude(dp) == 0.0) break;
    z = z - horner(coeffs, z) / dp;
  }
  return z;
}

}  // namespace webflat::num
