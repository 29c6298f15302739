// Holomorphic foliations on P^2: construction, inflection divisor, Gauss
// map, invariant lines, convexity, tangency and singularities.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webflat/geometry.hpp"
#include "webflat/mpoly.hpp"

namespace webflat::fol {

using geo::LineInPlane;
using geo::ProjPoint;
using poly::GaussRat;
using poly::MPoly;

/// Three-valued answer for tests whose floating evidence may be ambiguous.
enum class Tri { no, yes, inconclusive };
std::string to_string(Tri t);

enum class Certification { exact, floating };
std::string to_string(Certification c);

/// A saturated foliation of degree d, kept both as the affine 1-form
/// a dx + b dy over {x, y} and as the homogeneous triple (A, B, C) over
/// {x, y, z} with xA + yB + zC = 0. The triple is scaled so that the first
/// nonzero of A, B, C has leading coefficient 1; (a, b) keep the scale they
/// were given with (after saturation).
class Foliation {
 public:
  /// omega = a dx + b dy. Throws std::invalid_argument for the zero form or
  /// variables other than x, y.
  static Foliation from_form(const MPoly& a, const MPoly& b, std::string label = "");
  /// The foliation of the vector field A d/dx + B d/dy, i.e. omega = B dx - A dy.
  static Foliation from_vector_field(const MPoly& A, const MPoly& B, std::string label = "");
  /// From a homogeneous triple satisfying the Euler relation (checked).
  static Foliation from_homogeneous(const MPoly& A, const MPoly& B, const MPoly& C, std::string label = "");

  const MPoly& a() const { return a_; }
  const MPoly& b() const { return b_; }
  const std::array<MPoly, 3>& form() const { return form_; }
  int degree() const { return degree_; }
  const std::string& label() const { return label_; }

  /// Homogeneous vector field inducing the foliation: the curl of (A, B, C),
  /// which equals -(d+2) X + div(X) R for any inducing X (R the radial field).
  const std::array<MPoly, 3>& lift() const { return lift_; }
  /// Whether a and b are homogeneous of one common degree in (x, y).
  bool is_homogeneous() const;
  /// Image under the projective change v -> T v.
  Foliation transformed(const geo::Mat3& T) const;
  /// Equality as foliations (proportional homogeneous triples).
  bool same_as(const Foliation& other) const;

 private:
  Foliation() = default;
  void finish();

  MPoly a_, b_;
  std::array<MPoly, 3> form_;
  std::array<MPoly, 3> lift_;
  int degree_ = 0;
  std::string label_;
};

/// Reads `foliation { a = <poly>; b = <poly>; }` (omega = a dx + b dy) or
/// `vectorfield { A = <poly>; B = <poly>; }` (omega = B dx - A dy), with
/// polynomials over {x, y}. Throws std::invalid_argument on malformed text.
Foliation parse_foliation(std::string_view text, std::string label = "");

/// Monic determinant det[R; X; X(X)] over {x, y, z}, of degree 3d. Degree-0
/// foliations (pencils of lines) have identically zero determinant and
/// return the zero polynomial.
MPoly inflection_divisor(const Foliation& F);

/// [A(p) : B(p) : C(p)], the tangent line at p as a point of the dual plane.
/// Throws std::domain_error("Gauss map undefined ...") at singular points.
ProjPoint gauss_map(const Foliation& F, const ProjPoint& p);

struct LineFactor {
  LineInPlane line;
  int multiplicity = 1;
  Certification cert = Certification::exact;
};

/// Linear factors of a homogeneous polynomial in (x, y, z).
struct DivisorFactorization {
  std::vector<LineFactor> factors;
  /// The polynomial divided by all exact line factors (floating factors
  /// cannot be divided out exactly and remain inside).
  MPoly residual;
  /// True when the residual is constant or consists exactly of the floating
  /// line factors (degree count).
  bool fully_split = false;
  /// Sum of multiplicities of the certified floating factors.
  int floating_degree = 0;
};

/// Extracts the line components of H by intersecting it with two generic
/// lines, pairing the intersection points and certifying each candidate by
/// exact trial division (Gaussian-rational lines) or by a relative residual
/// below 1e-10 at sample points on the line (floating lines).
DivisorFactorization factor_lines(const MPoly& H, std::uint64_t seed = 0x11e5);

/// Whether the line is invariant: l divides X(l) (exactly, or numerically).
Tri is_invariant(const Foliation& F, const LineInPlane& l);

struct InvariantLine {
  LineInPlane line;
  int multiplicity = 1;  // multiplicity as a component of I(F)
  Certification cert = Certification::exact;
};

/// The invariant lines among the linear factors of I(F), sorted.
std::vector<InvariantLine> invariant_lines(const Foliation& F);

struct ConvexityReport {
  Tri convex = Tri::inconclusive;
  Tri reduced = Tri::inconclusive;
  DivisorFactorization factorization;
  std::vector<InvariantLine> lines;
  std::vector<LineInPlane> non_invariant_lines;
  /// Non-line part of I(F) when convexity fails (constant otherwise).
  MPoly witness;
};

ConvexityReport convexity(const Foliation& F);
inline Tri is_convex(const Foliation& F) { return convexity(F).convex; }
inline Tri is_reduced_convex(const Foliation& F) { return convexity(F).reduced; }

/// a_F b_G - a_G b_F over {x, y}.
MPoly tangency_affine(const Foliation& F, const Foliation& G);
/// The affine tangency homogenized to degree d_F + d_G + 1 over {x, y, z};
/// the power of z is the multiplicity of the line at infinity. Throws
/// std::invalid_argument for identical foliations (identically zero).
MPoly tangency_divisor(const Foliation& F, const Foliation& G);

/// Chart used to study a point: z = 1 (coordinates x, y), y = 1 (x, z) or x = 1 (y, z).
enum class Chart { z, y, x };
std::string to_string(Chart c);

struct SingularityRecord {
  ProjPoint location;
  /// Local intersection multiplicity (Milnor number); these sum to d^2+d+1.
  int milnor = 1;
  /// Algebraic multiplicity nu(F, s): order of the first nonzero jet.
  int nu = 0;
  /// nu when the first nonzero jet is a function multiple of the radial field.
  std::optional<int> radial_order;
  /// Order of the tangent cone x Q - y P minus one (equals nu unless the
  /// singularity is radial, where it measures how dicritical the point is).
  std::optional<int> contact_order;
  bool special = false;
  /// False when floating data left the jet ambiguous.
  bool classified = true;
};

/// Jet classification of a singular point in the chart of choice (the
/// default picks z = 1, then y = 1, then x = 1).
SingularityRecord classify_singularity(const Foliation& F, const ProjPoint& s, std::optional<Chart> chart = {});

struct SingularSet {
  std::vector<SingularityRecord> points;  // canonical order
  int total_milnor = 0;
  /// total_milnor == d^2 + d + 1 and every point was located.
  bool complete = false;
};

/// All singular points with multiplicities, classified.
SingularSet singular_points(const Foliation& F, std::uint64_t seed = 0x5117);

struct SpecialSingularities {
  std::vector<SingularityRecord> special;  // Sigma(F)
  std::vector<SingularityRecord> radial;   // Sigma^rad(F)
  std::vector<geo::DualLine> special_duals;
  std::vector<geo::DualLine> radial_duals;
  bool complete = true;  // false if some point could not be classified
};

SpecialSingularities special_singularities(const Foliation& F);
SpecialSingularities special_singularities(const SingularSet& set);

}  // namespace webflat::fol
