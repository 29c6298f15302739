// Webs built from lines and foliations, their implicit presentations, the
// Legendre transform and the discriminant of the dual web.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "webflat/foliation.hpp"

namespace webflat::web {

using fol::Foliation;
using geo::LineInPlane;
using poly::MPoly;

/// A formal product l_1 x ... x l_k x F_1 x ... x F_n. Lines stay lines here;
/// they only become webs (pencils) after the Legendre transform.
struct WebSpec {
  std::vector<LineInPlane> lines;
  std::vector<Foliation> foliations;

  static WebSpec of(const Foliation& F) { return {{}, {F}}; }
  static WebSpec of(const LineInPlane& l) { return {{l}, {}}; }

  /// |lines| + sum of foliation degrees: the number of directions of the dual web.
  int dual_degree() const;
  std::string describe() const;
  /// Throws std::invalid_argument for an empty web, repeated entries, the
  /// line at infinity, or degree-0 foliations.
  void validate() const;
};

/// The product of two webs (concatenation, validated).
WebSpec operator*(const WebSpec& a, const WebSpec& b);

enum class Convention {
  primal,  // variables (x, y, p) with p = dy/dx
  dual,    // variables (p, q, x) with x = -dq/dp
};

struct ImplicitWeb {
  MPoly poly;
  Convention convention = Convention::primal;
  int degree_in_s = 0;  // degree in the slope carrier (p or x)

  const char* slope_var() const { return convention == Convention::primal ? "p" : "x"; }
};

/// a(x, y) + p b(x, y) over {x, y, p}.
ImplicitWeb implicit_presentation(const Foliation& F);

/// The dual factor of one component over {p, q, x}: F(x, px + q; p) for a
/// foliation and (alpha + beta p) x + beta q + gamma for a line (scaled so
/// that beta = 1 when beta is nonzero).
MPoly legendre_factor(const Foliation& F);
MPoly legendre_factor(const LineInPlane& l);
/// All dual factors, lines first, in the order of the spec.
std::vector<MPoly> legendre_factors(const WebSpec& W);

/// The product of the dual factors. Throws std::invalid_argument with
/// "identically zero discriminant" when two components coincide.
ImplicitWeb legendre(const WebSpec& W);

struct WebDegree {
  int directions = 0;    // degree in x
  int dual_degree = 0;   // max total (p, q)-degree of the coefficients
};
WebDegree legendre_degree_check(const WebSpec& W);

/// disc_x of the dual web kept in factored form: the discriminants of the
/// individual factors and the squares of their pairwise resultants.
struct FactoredDiscriminant {
  std::vector<std::pair<MPoly, int>> factors;  // nonconstant, monic, over {p, q}
  /// The product, made monic (1 when every factor is constant).
  MPoly expand() const;
};

FactoredDiscriminant discriminant_factors(const WebSpec& W);
/// disc_x of the dual web over {p, q}, monic.
MPoly discriminant_resultant(const WebSpec& W);

enum class ComponentKind { dual_line, gauss_image };

/// A piece of the predicted discriminant: either the dual line of a primal
/// point, or the Gauss image under one foliation of a primal curve.
struct DiscComponent {
  ComponentKind kind = ComponentKind::dual_line;
  /// radial, special, origin, common-singular, line-singular, line-line,
  /// inflection, tangency or line-tangency.
  std::string tag;
  std::optional<geo::DualLine> line;
  int foliation = -1;          // index into WebSpec::foliations (Gauss images)
  MPoly curve;                 // affine primal curve over {x, y}, if any
  std::optional<LineInPlane> primal_line;  // set instead of `curve` for lines
  bool at_infinity = false;    // the curve is the line at infinity

  std::string to_string() const;
};

struct DiscriminantReport {
  std::vector<DiscComponent> components;
  FactoredDiscriminant resultant;
  std::vector<Foliation> foliations;
  std::vector<MPoly> foliation_duals;  // legendre_factor of each foliation
  /// False when some singular point could not be classified.
  bool complete = true;
};

/// Assembles the predicted components and the factored resultant discriminant.
DiscriminantReport discriminant_structural(const WebSpec& W);

struct CrossCheck {
  bool certified = false;
  int samples = 0;
  /// A discriminant point no component explains, or a component point where
  /// the discriminant does not vanish.
  std::optional<std::pair<std::complex<double>, std::complex<double>>> witness;
  std::string detail;
};

/// Up to `count` points of a component in the (p, q) chart. Dual lines are
/// sampled at random p (or q for vertical ones); Gauss images through curve
/// points. Empty for the dual line at infinity.
std::vector<std::pair<std::complex<double>, std::complex<double>>> component_points(
    const DiscriminantReport& report, const DiscComponent& c, int count, std::uint64_t seed);

/// Checks both inclusions: every component lies in the resultant
/// discriminant (exact divisibility for exact lines, sampling otherwise),
/// and `samples` random points of the resultant discriminant are explained
/// by some component.
CrossCheck cross_check_discriminant(const DiscriminantReport& report, int samples = 200,
                                    std::uint64_t seed = 0xd15c);

}  // namespace webflat::web
