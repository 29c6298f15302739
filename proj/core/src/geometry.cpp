#include "webflat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace webflat::geo {

namespace {

double max_abs(const CVec3& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

CVec3 to_c(const QVec3& v) { return {v[0].to_complex(), v[1].to_complex(), v[2].to_complex()}; }

QVec3 cross(const QVec3& a, const QVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

CVec3 cross(const CVec3& a, const CVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

bool lex_less(const CVec3& a, const CVec3& b) {
  for (int k = 0; k < 3; ++k) {
    // Round so that tiny floating noise does not reorder equal points.
    double ar = std::round(a[k].real() * 1e9);
    double br = std::round(b[k].real() * 1e9);
    if (ar != br) return ar < br;
    double ai = std::round(a[k].imag() * 1e9);
    double bi = std::round(b[k].imag() * 1e9);
    if (ai != bi) return ai < bi;
  }
  return false;
}

std::string coord_text(const GaussRat& c) { return c.to_string(); }

std::string coord_text(std::complex<double> c) {
  char buf[96];
  if (std::abs(c.imag()) < 1e-14 * std::max(1.0, std::abs(c.real()))) {
    std::snprintf(buf, sizeof buf, "%.12g", c.real());
  } else {
    std::snprintf(buf, sizeof buf, "(%.12g%+.12g*i)", c.real(), c.imag());
  }
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- ProjPoint

ProjPoint ProjPoint::exact(const GaussRat& x, const GaussRat& y, const GaussRat& z) {
  QVec3 v{x, y, z};
  GaussRat s;
  if (!z.is_zero()) {
    s = z;
  } else if (!x.is_zero()) {
    s = x;
  } else if (!y.is_zero()) {
    s = y;
  } else {
    throw std::invalid_argument("the zero vector is not a projective point");
  }
  GaussRat inv = s.inverse();
  for (auto& c : v) c *= inv;
  ProjPoint p;
  p.exact_ = v;
  p.approx_ = to_c(v);
  return p;
}

ProjPoint ProjPoint::floating(const CVec3& v) {
  const double m = max_abs(v);
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("invalid floating projective point");
  CVec3 w = v;
  std::complex<double> s;
  if (std::abs(v[2]) > 1e-13 * m) {
    s = v[2];
  } else {
    w[2] = 0.0;
    s = std::abs(v[0]) > 1e-13 * m ? v[0] : v[1];
  }
  for (auto& c : w) c /= s;
  ProjPoint p;
  p.approx_ = w;
  return p;
}

const QVec3& ProjPoint::exact_coords() const {
  if (!exact_) throw std::logic_error("point has no exact coordinates");
  return *exact_;
}

bool ProjPoint::at_infinity() const {
  return exact_ ? (*exact_)[2].is_zero() : approx_[2] == 0.0;
}

std::string ProjPoint::to_string() const {
  auto text = [&](int k) { return exact_ ? coord_text((*exact_)[k]) : coord_text(approx_[k]); };
  if (at_infinity()) return "[" + text(0) + ":" + text(1) + ":0]";
  return "(" + text(0) + ", " + text(1) + ")";
}

double ProjPoint::distance(const ProjPoint& other) const {
  if (at_infinity() != other.at_infinity()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(approx_[k] - other.approx_[k]));
  return d;
}

bool operator==(const ProjPoint& a, const ProjPoint& b) {
  if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
  return a.distance(b) < 1e-9;
}

bool operator<(const ProjPoint& a, const ProjPoint& b) {
  if (a.at_infinity() != b.at_infinity()) return !a.at_infinity();
  return lex_less(a.approx_, b.approx_);
}

// ---------------------------------------------------------------- LineInPlane

LineInPlane::LineInPlane(const GaussRat& alpha, const GaussRat& beta, const GaussRat& gamma) {
  QVec3 v{alpha, beta, gamma};
  int lead = -1;
  for (int k = 0; k < 3 && lead < 0; ++k) {
    if (!v[k].is_zero()) lead = k;
  }
  if (lead < 0) throw std::invalid_argument("the zero form does not define a line");
  GaussRat inv = v[lead].inverse();
  for (auto& c : v) c *= inv;
  exact_ = v;
  approx_ = to_c(v);
}

LineInPlane LineInPlane::floating(const CVec3& coeffs) {
  const double m = max_abs(coeffs);
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("invalid floating line");
  LineInPlane l;
  int lead = 0;
  while (std::abs(coeffs[lead]) <= 1e-13 * m) ++lead;
  for (int k = 0; k < 3; ++k) {
    l.approx_[k] = std::abs(coeffs[k]) <= 1e-13 * m ? 0.0 : coeffs[k] / coeffs[lead];
  }
  return l;
}

LineInPlane LineInPlane::from_poly(const MPoly& form) {
  if (form.total_degree() != 1 || !form.is_homogeneous()) {
    throw std::invalid_argument("not a homogeneous linear form: " + form.to_string());
  }
  MPoly f = form.with_vars(poly::merge_vars({"x", "y", "z"}, form.vars()));
  if (f.nvars() != 3) throw std::invalid_argument("line forms must use only x, y, z");
  QVec3 c{GaussRat(0), GaussRat(0), GaussRat(0)};
  for (const auto& t : f.terms()) {
    for (int k = 0; k < 3; ++k) {
      if (t.mono.exponent(k) == 1) c[k] = t.coef;
    }
  }
  return {c[0], c[1], c[2]};
}

const QVec3& LineInPlane::exact_coeffs() const {
  if (!exact_) throw std::logic_error("line has no exact coefficients");
  return *exact_;
}

bool LineInPlane::is_infinity() const {
  return approx_[0] == 0.0 && approx_[1] == 0.0;
}

MPoly LineInPlane::poly() const {
  const QVec3& c = exact_coeffs();
  poly::VarList v{"x", "y", "z"};
  MPoly out(v);
  for (int k = 0; k < 3; ++k) out += MPoly::variable(v, v[k]) * c[k];
  return out;
}

ProjPoint LineInPlane::dual_point() const {
  if (exact_) return ProjPoint::exact((*exact_)[0], (*exact_)[1], (*exact_)[2]);
  return ProjPoint::floating(approx_);
}

bool LineInPlane::contains(const ProjPoint& p, double tol) const {
  if (exact_ && p.is_exact()) {
    const QVec3& a = *exact_;
    const QVec3& b = p.exact_coords();
    return (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).is_zero();
  }
  std::complex<double> s = 0.0;
  double scale = 0.0;
  for (int k = 0; k < 3; ++k) {
    s += approx_[k] * p.coords()[k];
    scale += std::abs(approx_[k]) * std::abs(p.coords()[k]);
  }
  return std::abs(s) <= tol * std::max(scale, 1e-300);
}

std::array<ProjPoint, 2> LineInPlane::spanning_points() const {
  std::array<ProjPoint, 2> out;
  int found = 0;
  for (int k = 0; k < 3 && found < 2; ++k) {
    if (exact_) {
      QVec3 e{GaussRat(0), GaussRat(0), GaussRat(0)};
      e[k] = GaussRat(1);
      QVec3 c = cross(*exact_, e);
      if (c[0].is_zero() && c[1].is_zero() && c[2].is_zero()) continue;
      ProjPoint p = ProjPoint::exact(c[0], c[1], c[2]);
      if (found == 1 && p == out[0]) continue;
      out[found++] = p;
    } else {
      CVec3 e{0.0, 0.0, 0.0};
      e[k] = 1.0;
      CVec3 c = cross(approx_, e);
      if (max_abs(c) < 1e-13) continue;
      ProjPoint p = ProjPoint::floating(c);
      if (found == 1 && p.distance(out[0]) < 1e-9) continue;
      out[found++] = p;
    }
  }
  return out;
}

std::string LineInPlane::to_string() const {
  if (exact_) return poly().to_string();
  std::string s;
  const char* names[3] = {"x", "y", "z"};
  for (int k = 0; k < 3; ++k) {
    if (approx_[k] == 0.0) continue;
    if (!s.empty()) s += " + ";
    s += coord_text(approx_[k]) + "*" + names[k];
  }
  return s;
}

double LineInPlane::distance(const LineInPlane& other) const {
  double d = 0.0;
  for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(approx_[k] - other.approx_[k]));
  return d;
}

bool operator==(const LineInPlane& a, const LineInPlane& b) {
  if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
  return a.distance(b) < 1e-9;
}

bool operator<(const LineInPlane& a, const LineInPlane& b) { return lex_less(a.approx_, b.approx_); }

ProjPoint intersection(const LineInPlane& a, const LineInPlane& b) {
  if (a.is_exact() && b.is_exact()) {
    QVec3 c = cross(a.exact_coeffs(), b.exact_coeffs());
    return ProjPoint::exact(c[0], c[1], c[2]);
  }
  return ProjPoint::floating(cross(a.coeffs(), b.coeffs()));
}

LineInPlane join(const ProjPoint& a, const ProjPoint& b) {
  if (a.is_exact() && b.is_exact()) {
    QVec3 c = cross(a.exact_coords(), b.exact_coords());
    return {c[0], c[1], c[2]};
  }
  return LineInPlane::floating(cross(a.coords(), b.coords()));
}

// ---------------------------------------------------------------- DualLine

MPoly DualLine::poly() const {
  const QVec3& c = point.exact_coords();
  poly::VarList v{"p", "q"};
  return MPoly::variable(v, "p") * c[0] + MPoly::variable(v, "q") * c[2] - MPoly::constant(v, c[1]);
}

std::complex<double> DualLine::eval(std::complex<double> p, std::complex<double> q) const {
  const CVec3& c = point.coords();
  return c[0] * p + c[2] * q - c[1];
}

std::string DualLine::to_string() const {
  if (at_infinity()) return "line at infinity";
  if (point.is_exact()) return poly().to_string() + " = 0";
  const CVec3& c = point.coords();
  return coord_text(c[0]) + "*p + " + coord_text(c[2]) + "*q - " + coord_text(c[1]) + " = 0";
}

CVec3 dual_coords_from_pq(std::complex<double> p, std::complex<double> q) { return {-p, 1.0, -q}; }

bool pq_from_dual_coords(const CVec3& line, std::complex<double>& p, std::complex<double>& q) {
  if (std::abs(line[1]) <= 1e-14 * max_abs(line)) return false;
  p = -line[0] / line[1];
  q = -line[2] / line[1];
  return true;
}

// ---------------------------------------------------------------- Mat3

Mat3::Mat3() {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m_[r][c] = GaussRat(r == c ? 1 : 0);
}

Mat3::Mat3(const std::array<QVec3, 3>& rows) : m_(rows) {}

Mat3 Mat3::random(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-3, 3);
  for (;;) {
    std::array<QVec3, 3> rows;
    for (auto& row : rows)
      for (auto& e : row) e = GaussRat(dist(rng));
    Mat3 m(rows);
    if (!m.det().is_zero()) return m;
  }
}

GaussRat Mat3::det() const {
  return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
         m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
         m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
}

Mat3 Mat3::inverse() const {
  GaussRat d = det();
  if (d.is_zero()) throw std::domain_error("singular projective change");
  GaussRat inv = d.inverse();
  std::array<QVec3, 3> r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // Adjugate: cofactor of (j, i).
      int r0 = (j + 1) % 3;
      int r1 = (j + 2) % 3;
      int c0 = (i + 1) % 3;
      int c1 = (i + 2) % 3;
      r[i][j] = (m_[r0][c0] * m_[r1][c1] - m_[r0][c1] * m_[r1][c0]) * inv;
    }
  }
  return Mat3(r);
}

Mat3 Mat3::transpose() const {
  std::array<QVec3, 3> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m_[j][i];
  return Mat3(r);
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  std::array<QVec3, 3> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      GaussRat s;
      for (int k = 0; k < 3; ++k) s += a.m_[i][k] * b.m_[k][j];
      r[i][j] = s;
    }
  return Mat3(r);
}

QVec3 Mat3::apply(const QVec3& v) const {
  QVec3 out;
  for (int i = 0; i < 3; ++i) out[i] = m_[i][0] * v[0] + m_[i][1] * v[1] + m_[i][2] * v[2];
  return out;
}

CVec3 Mat3::apply(const CVec3& v) const {
  CVec3 out;
  for (int i = 0; i < 3; ++i) {
    out[i] = m_[i][0].to_complex() * v[0] + m_[i][1].to_complex() * v[1] + m_[i][2].to_complex() * v[2];
  }
  return out;
}

ProjPoint Mat3::map_point(const ProjPoint& p) const {
  if (p.is_exact()) {
    QVec3 v = apply(p.exact_coords());
    return ProjPoint::exact(v[0], v[1], v[2]);
  }
  return ProjPoint::floating(apply(p.coords()));
}

LineInPlane Mat3::map_line(const LineInPlane& l) const {
  Mat3 it = inverse().transpose();
  if (l.is_exact()) {
    QVec3 v = it.apply(l.exact_coeffs());
    return {v[0], v[1], v[2]};
  }
  return LineInPlane::floating(it.apply(l.coeffs()));
}

MPoly Mat3::map_curve(const MPoly& f) const {
  poly::VarList v{"x", "y", "z"};
  MPoly g = f.with_vars(poly::merge_vars(v, f.vars()));
  if (g.nvars() != 3) throw std::invalid_argument("curves must be polynomials in x, y, z");
  Mat3 inv = inverse();
  std::vector<MPoly> images;
  for (int i = 0; i < 3; ++i) {
    MPoly row(v);
    for (int k = 0; k < 3; ++k) row += MPoly::variable(v, v[k]) * inv.at(i, k);
    images.push_back(row);
  }
  return g.compose(images);
}

}  // namespace webflat::geo
