// Example foliations and webs, and checkers for the hypotheses of the
// flatness criteria for products of lines and foliations.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "webflat/webleg.hpp"

namespace webflat::fam {

using fol::Foliation;
using geo::LineInPlane;
using poly::GaussRat;
using web::WebSpec;

/// (x^d - x) d/dx + (y^d - y) d/dy, d >= 2.
Foliation fermat(int d);
/// y^d dx - x^d dy, d >= 2.
Foliation homogeneous(int d);
/// lambda y dx + x dy and y^2 dx + x^2 dy. Their tangency outside the axes
/// and infinity is the line lambda x - y = 0; lambda = -1 makes it invariant
/// and is rejected (std::invalid_argument naming the line), as is 0.
WebSpec ex3(const GaussRat& lambda);
/// a = a_{<=d} + y g, b = b_{<=d} - x g with g homogeneous of degree d and
/// small rational coefficients drawn from the seed.
Foliation random_foliation(int d, std::uint64_t seed);
LineInPlane line(const GaussRat& a, const GaussRat& b, const GaussRat& c);

struct Hypothesis {
  std::string name;
  bool passed = false;
  /// "exact", "certified-floating", or "inconclusive".
  std::string strength;
  std::string detail;
};

struct Scenario {
  WebSpec web;
  std::vector<Hypothesis> hypotheses;
  bool all_passed() const;
};

/// Whether every factor of Tang(F, G) is a line invariant by both (lines in
/// `allowed` are accepted without invariance), and whether Tang is reduced.
struct TangencyLines {
  bool lines_only = false;
  bool invariant = false;
  bool reduced = false;
  bool floating = false;  // some factor only certified numerically
  std::vector<fol::LineFactor> factors;
  std::string detail;
};
TangencyLines tangency_lines(const Foliation& F, const Foliation& G, const std::vector<LineInPlane>& allowed = {});

/// Convex reduced members, tangencies made of common invariant lines, and
/// lines invariant by every member.
Scenario theoremA_scenario(const std::vector<LineInPlane>& lines, const std::vector<Foliation>& foliations);
/// Convex homogeneous members, tangencies made of the line at infinity and
/// common invariant lines, and lines invariant by every member.
Scenario theoremB_scenario(const std::vector<LineInPlane>& lines, const std::vector<Foliation>& foliations);

}  // namespace webflat::fam
