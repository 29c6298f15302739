// Points, lines and projective changes of coordinates on P^2 and its dual.
#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>

#include "webflat/mpoly.hpp"

namespace webflat::geo {

using poly::GaussRat;
using poly::MPoly;
using CVec3 = std::array<std::complex<double>, 3>;
using QVec3 = std::array<GaussRat, 3>;

/// Homogeneous coordinates [x:y:z], exact when possible. Normalized so that
/// z = 1 for affine points and otherwise the first nonzero coordinate is 1.
class ProjPoint {
 public:
  ProjPoint() = default;
  /// Throws std::invalid_argument for the zero vector.
  static ProjPoint exact(const GaussRat& x, const GaussRat& y, const GaussRat& z);
  static ProjPoint affine(const GaussRat& x, const GaussRat& y) { return exact(x, y, GaussRat(1)); }
  static ProjPoint floating(const CVec3& v);

  bool is_exact() const { return exact_.has_value(); }
  const QVec3& exact_coords() const;
  const CVec3& coords() const { return approx_; }
  bool at_infinity() const;

  /// Affine points print as "(x, y)", points at infinity as "[x:y:0]".
  std::string to_string() const;
  /// Distance between normalized representatives (infinity if one is affine
  /// and the other is not).
  double distance(const ProjPoint& other) const;
  friend bool operator==(const ProjPoint& a, const ProjPoint& b);
  /// Canonical order: affine before infinite, then lexicographic on coordinates.
  friend bool operator<(const ProjPoint& a, const ProjPoint& b);

 private:
  std::optional<QVec3> exact_;
  CVec3 approx_{};
};

/// A line alpha*x + beta*y + gamma*z = 0, normalized so that its first
/// nonzero coefficient is 1. Exact (Gaussian-rational) or floating.
class LineInPlane {
 public:
  LineInPlane() = default;
  /// Throws std::invalid_argument for (0, 0, 0).
  LineInPlane(const GaussRat& alpha, const GaussRat& beta, const GaussRat& gamma);
  static LineInPlane floating(const CVec3& coeffs);
  /// Reads a homogeneous linear form in (x, y, z).
  static LineInPlane from_poly(const MPoly& form);
  static LineInPlane infinity() { return {GaussRat(0), GaussRat(0), GaussRat(1)}; }

  bool is_exact() const { return exact_.has_value(); }
  const QVec3& exact_coeffs() const;
  const CVec3& coeffs() const { return approx_; }
  bool is_infinity() const;

  /// The linear form over {x, y, z}; exact lines only.
  MPoly poly() const;
  /// The dual point [alpha:beta:gamma].
  ProjPoint dual_point() const;
  /// Whether the point lies on the line (exactly, or within `tol` relative).
  bool contains(const ProjPoint& p, double tol = 1e-10) const;
  /// Two distinct points spanning the line.
  std::array<ProjPoint, 2> spanning_points() const;

  std::string to_string() const;
  double distance(const LineInPlane& other) const;
  friend bool operator==(const LineInPlane& a, const LineInPlane& b);
  friend bool operator<(const LineInPlane& a, const LineInPlane& b);

 private:
  std::optional<QVec3> exact_;
  CVec3 approx_{};
};

/// Intersection point of two distinct lines (cross product).
ProjPoint intersection(const LineInPlane& a, const LineInPlane& b);
/// Line through two distinct points.
LineInPlane join(const ProjPoint& a, const ProjPoint& b);

/// Line in the dual plane given by a point [x0:y0:z0] of the primal plane.
/// In the affine dual chart (p, q), where (p, q) is the line y = p x + q,
/// it reads x0*p + z0*q - y0 = 0.
struct DualLine {
  ProjPoint point;  // the primal point it is dual to

  bool at_infinity() const { return point.coords()[0] == 0.0 && point.coords()[2] == 0.0; }
  /// The affine equation over {p, q}; exact points only.
  MPoly poly() const;
  /// x0 p + z0 q - y0 at complex (p, q).
  std::complex<double> eval(std::complex<double> p, std::complex<double> q) const;
  std::string to_string() const;
};

/// Conversions between dual homogeneous coordinates [alpha:beta:gamma] and
/// the (p, q) chart: the line y = p x + q has coordinates [-p : 1 : -q].
CVec3 dual_coords_from_pq(std::complex<double> p, std::complex<double> q);
/// Returns false when beta vanishes (vertical line, outside the chart).
bool pq_from_dual_coords(const CVec3& line, std::complex<double>& p, std::complex<double>& q);

/// Exact 3x3 projective change of coordinates.
class Mat3 {
 public:
  Mat3();  // identity
  explicit Mat3(const std::array<QVec3, 3>& rows);
  /// A seeded random invertible matrix with small integer entries.
  static Mat3 random(std::uint64_t seed);

  const GaussRat& at(int r, int c) const { return m_[r][c]; }
  GaussRat det() const;
  /// Throws std::domain_error for a singular matrix.
  Mat3 inverse() const;
  Mat3 transpose() const;
  friend Mat3 operator*(const Mat3& a, const Mat3& b);

  QVec3 apply(const QVec3& v) const;
  CVec3 apply(const CVec3& v) const;
  /// Points transform by v -> M v.
  ProjPoint map_point(const ProjPoint& p) const;
  /// Lines transform by the inverse transpose, so that incidence is preserved
  /// when points are mapped by M.
  LineInPlane map_line(const LineInPlane& l) const;
  /// The polynomial f(M^{-1} v) (the image of the curve {f = 0} under M)
  /// over {x, y, z}.
  MPoly map_curve(const MPoly& f) const;

 private:
  std::array<QVec3, 3> m_;
};

}  // namespace webflat::geo
