// Dense univariate polynomials over Q(i), squarefree decomposition, and
// root finding with exact recognition of Gaussian-rational roots.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "webflat/mpoly.hpp"

namespace webflat::poly {

class UPoly {
 public:
  UPoly() = default;
  /// Coefficients from the constant term upward; trailing zeros are dropped.
  explicit UPoly(std::vector<GaussRat> coeffs);
  static UPoly x_minus(const GaussRat& r);
  /// Throws std::invalid_argument if f involves any variable other than `var`.
  static UPoly from_mpoly(const MPoly& f, int var);
  MPoly to_mpoly(const VarList& vars, int var) const;

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<GaussRat>& coeffs() const { return c_; }
  const GaussRat& lc() const { return c_.back(); }

  GaussRat eval(const GaussRat& x) const;
  UPoly derivative() const;
  UPoly monic() const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  /// Euclidean division; throws std::domain_error on a zero divisor.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
  /// Monic gcd (zero only when both inputs are zero).
  static UPoly gcd(const UPoly& a, const UPoly& b);

  /// Coefficients as complex doubles, low to high.
  std::vector<std::complex<double>> to_complex() const;

 private:
  void trim();
  std::vector<GaussRat> c_;
};

/// Yun's algorithm: pairs (s_k, k) with f = lc * prod s_k^k, s_k monic,
/// squarefree and pairwise coprime. Factors of degree zero are omitted.
std::vector<std::pair<UPoly, int>> squarefree_decomposition(const UPoly& f);

struct URoot {
  std::complex<double> value;
  std::optional<GaussRat> exact;  // set when a Gaussian-rational root was verified
  int multiplicity = 1;
};

/// All roots with multiplicity. Roots are located numerically on each
/// squarefree factor (Aberth, then Newton in double-double), and a root is
/// reported exact only after exact verification. Deterministic for a seed.
std::vector<URoot> roots_with_multiplicity(const UPoly& f, std::uint64_t seed = 0x5eed);

/// Exact Gaussian-rational roots only (with multiplicity).
std::vector<std::pair<GaussRat, int>> exact_roots(const UPoly& f, std::uint64_t seed = 0x5eed);

}  // namespace webflat::poly
