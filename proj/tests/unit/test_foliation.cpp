#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "webflat/elimination.hpp"
#include "webflat/foliation.hpp"

using namespace webflat;
using fol::Foliation;
using fol::Tri;
using geo::LineInPlane;
using geo::ProjPoint;
using poly::GaussRat;
using poly::MPoly;
using poly::Rat;

namespace {

const poly::VarList XY{"x", "y"};
const poly::VarList XYZ{"x", "y", "z"};

MPoly p2(const std::string& s) { return poly::parse_poly(s, XY); }
MPoly p3(const std::string& s) { return poly::parse_poly(s, XYZ); }

Foliation fermat(int d) {
  std::string e = std::to_string(d);
  return Foliation::from_vector_field(p2("x^" + e + " - x"), p2("y^" + e + " - y"), "fermat");
}

Foliation homog(int d) {
  std::string e = std::to_string(d);
  return Foliation::from_form(p2("y^" + e), p2("-x^" + e), "homog");
}

Foliation random_deg2(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> c(-3, 3);
  auto rnd = [&](const std::vector<std::string>& monos) {
    MPoly acc(XY);
    for (const auto& m : monos) acc += p2(m) * GaussRat(c(rng));
    return acc;
  };
  std::vector<std::string> low{"1", "x", "y", "x^2", "x*y", "y^2"};
  MPoly g = rnd({"x^2", "x*y", "y^2"});
  if (g.is_zero()) g = p2("x*y");
  return Foliation::from_form(rnd(low) + p2("y") * g, rnd(low) - p2("x") * g, "random");
}

// det[R; X; X(X)] written out independently from a chosen homogeneous lift.
MPoly det_oracle(const std::array<MPoly, 3>& X) {
  std::array<MPoly, 3> XX;
  for (int i = 0; i < 3; ++i) {
    XX[i] = MPoly(XYZ);
    for (int j = 0; j < 3; ++j) XX[i] += X[j] * X[i].derivative(j);
  }
  MPoly x = p3("x"), y = p3("y"), z = p3("z");
  // Sarrus' rule.
  return x * X[1] * XX[2] + y * X[2] * XX[0] + z * X[0] * XX[1] - z * X[1] * XX[0] - x * X[2] * XX[1] -
         y * X[0] * XX[2];
}

// The affine field A d/dx + B d/dy of degree d lifted as (z^d A(x/z,y/z), z^d B(x/z,y/z), 0).
std::array<MPoly, 3> affine_lift(const MPoly& A, const MPoly& B, int d) {
  return {A.homogenize("z", d).with_vars(XYZ), B.homogenize("z", d).with_vars(XYZ), MPoly(XYZ)};
}

std::set<std::string> line_names(const std::vector<fol::InvariantLine>& ls) {
  std::set<std::string> out;
  for (const auto& l : ls) out.insert(l.line.poly().to_string());
  return out;
}

ProjPoint pt(long x, long y, long z) { return ProjPoint::exact(GaussRat(x), GaussRat(y), GaussRat(z)); }

}  // namespace

TEST_CASE("construction recipes") {
  Foliation F = fermat(2);
  CHECK(F.degree() == 2);
  const auto& [A, B, C] = F.form();
  CHECK((p3("x") * A + p3("y") * B + p3("z") * C).is_zero());
  CHECK(A.total_degree() == 3);

  // Radial pencil: (-yz, xz, 0) saturates to a multiple of (-y, x, 0).
  Foliation R = Foliation::from_form(p2("-y"), p2("x"));
  CHECK(R.degree() == 0);
  CHECK(R.form()[0] == p3("y"));
  CHECK(R.form()[1] == p3("-x"));
  CHECK(R.form()[2].is_zero());
  CHECK(fol::inflection_divisor(R).is_zero());

  CHECK(homog(1).degree() == 0);  // y dx - x dy is the radial pencil
  for (int d = 2; d <= 5; ++d) {
    CHECK(homog(d).degree() == d);
    CHECK(homog(d).is_homogeneous());
  }
  CHECK_FALSE(F.is_homogeneous());

  // A common factor is removed before homogenizing.
  Foliation G = Foliation::from_form(p2("(x+1)*(y^2-y)"), p2("-(x+1)*(x^2-x)"));
  CHECK(G.same_as(F));

  CHECK_THROWS_AS(Foliation::from_form(MPoly(XY), MPoly(XY)), std::invalid_argument);
  CHECK_THROWS_AS(Foliation::from_form(p2("x"), poly::parse_poly("w", {"w"})), std::invalid_argument);
  CHECK_THROWS_AS(Foliation::from_homogeneous(p3("y"), p3("y"), p3("z")), std::invalid_argument);
}

TEST_CASE("inflection divisor of Fermat foliations") {
  MPoly I = fol::inflection_divisor(fermat(2));
  CHECK(I == p3("x*y*z*(x-z)*(y-z)*(x-y)").monic());

  for (int d = 2; d <= 5; ++d) {
    std::string e = std::to_string(d);
    Foliation F = fermat(d);
    MPoly I = fol::inflection_divisor(F);
    CHECK(I.total_degree() == 3 * d);
    CHECK(I.is_homogeneous());
    MPoly oracle = det_oracle(affine_lift(p2("x^" + e + " - x"), p2("y^" + e + " - y"), d));
    CHECK(I == oracle.monic());
  }
}

TEST_CASE("inflection divisor ignores the Euler ambiguity of the lift") {
  Foliation F = random_deg2(7);
  std::array<MPoly, 3> X = F.lift();
  MPoly h = p3("2*x - y + 3*z");
  X[0] += h * p3("x");
  X[1] += h * p3("y");
  X[2] += h * p3("z");
  CHECK(det_oracle(X).monic() == fol::inflection_divisor(F));
}

TEST_CASE("inflection divisor is projectively invariant") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    geo::Mat3 T = geo::Mat3::random(seed);
    for (const Foliation& F : {fermat(2), homog(3), random_deg2(seed)}) {
      MPoly lhs = fol::inflection_divisor(F.transformed(T));
      MPoly rhs = T.map_curve(fol::inflection_divisor(F)).monic();
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("transformations compose and invert") {
  geo::Mat3 T = geo::Mat3::random(11);
  Foliation F = random_deg2(5);
  CHECK(F.transformed(T).transformed(T.inverse()).same_as(F));
  CHECK(F.transformed(geo::Mat3()).same_as(F));
}

TEST_CASE("Gauss map") {
  Foliation R = Foliation::from_form(p2("-y"), p2("x"));
  CHECK(fol::gauss_map(R, ProjPoint::affine(GaussRat(2), GaussRat(5))) == pt(-5, 2, 0));

  Foliation F = random_deg2(3);
  ProjPoint p = ProjPoint::affine(GaussRat(Rat(1, 3)), GaussRat(7));
  ProjPoint p2x = pt(2, 42, 6);
  CHECK(fol::gauss_map(F, p) == fol::gauss_map(F, p2x));

  Foliation G = fermat(2);
  ProjPoint dual = LineInPlane(GaussRat(0), GaussRat(1), GaussRat(0)).dual_point();
  for (long x : {2L, 3L, -5L}) CHECK(fol::gauss_map(G, pt(x, 0, 1)) == dual);
  CHECK_THROWS_WITH_AS(fol::gauss_map(G, pt(1, 1, 1)), doctest::Contains("Gauss map undefined"), std::domain_error);

  ProjPoint fp = ProjPoint::floating({{2.0, 0.0, 1.0}});
  CHECK(fol::gauss_map(G, fp).distance(dual) < 1e-12);
}

TEST_CASE("invariant lines") {
  auto lines = fol::invariant_lines(fermat(2));
  CHECK(lines.size() == 6);
  CHECK(line_names(lines) == std::set<std::string>{"z", "x", "y", "x - z", "y - z", "x - y"});
  for (const auto& l : lines) CHECK(l.cert == fol::Certification::exact);

  auto h3 = fol::invariant_lines(homog(3));
  CHECK(line_names(h3) == std::set<std::string>{"z", "x", "y", "x - y", "x + y"});

  Foliation G = random_deg2(9);
  MPoly I = fol::inflection_divisor(G);
  for (const auto& l : fol::invariant_lines(G)) {
    CHECK(fol::is_invariant(G, l.line) == Tri::yes);
    CHECK(poly::try_divide(I, l.line.poly()).has_value());
  }
}

TEST_CASE("convexity") {
  for (int d : {2, 3, 5}) {
    auto rep = fol::convexity(fermat(d));
    CHECK(rep.convex == Tri::yes);
    CHECK(rep.reduced == Tri::yes);
    int total = 0;
    for (const auto& l : rep.lines) total += l.multiplicity;
    CHECK(total == 3 * d);
  }
  CHECK(fol::is_convex(homog(3)) == Tri::yes);

  Foliation G = random_deg2(21);
  auto rep = fol::convexity(G);
  CHECK(rep.convex == Tri::no);
  CHECK_FALSE(rep.witness.is_constant());
  CHECK(poly::try_divide(fol::inflection_divisor(G), rep.witness).has_value());
}

TEST_CASE("line factors with floating coefficients") {
  // z (x^2 - 2 y^2) (x - 3y + z): two lines through irrational slopes.
  MPoly H = p3("z*(x^2 - 2*y^2)*(x - 3*y + z)");
  auto fact = fol::factor_lines(H);
  CHECK(fact.fully_split);
  CHECK(fact.floating_degree == 2);
  REQUIRE(fact.factors.size() == 4);
  int exact = 0;
  for (const auto& f : fact.factors) {
    if (f.cert == fol::Certification::exact) {
      ++exact;
    } else {
      auto c = f.line.coeffs();
      CHECK(std::abs(std::abs(c[1]) - std::sqrt(2.0)) < 1e-12);
    }
  }
  CHECK(exact == 2);
  CHECK(fact.residual.total_degree() == 2);

  auto sq = fol::factor_lines(p3("x^2*(y-z)^3*(x^2+y^2+z^2)"));
  CHECK_FALSE(sq.fully_split);
  REQUIRE(sq.factors.size() == 2);
  CHECK(sq.factors[0].multiplicity + sq.factors[1].multiplicity == 5);
  CHECK(sq.residual == p3("x^2+y^2+z^2"));
}

TEST_CASE("floating invariance test") {
  Foliation H = homog(3);
  CHECK(fol::is_invariant(H, LineInPlane::floating({{1.0, -1.0, 0.0}})) == Tri::yes);
  CHECK(fol::is_invariant(H, LineInPlane::floating({{1.0, -std::sqrt(2.0), 0.0}})) == Tri::no);
}

TEST_CASE("tangency") {
  for (int d = 1; d <= 4; ++d) {
    std::string e = std::to_string(d);
    MPoly t = fol::tangency_affine(homog(d), homog(d + 1));
    CHECK(t == p2("x^" + e + "*y^" + e + "*(y-x)"));
  }
  MPoly t23 = fol::tangency_divisor(fermat(2), fermat(3));
  CHECK(t23.total_degree() == 6);
  CHECK(t23.monic() == fol::inflection_divisor(fermat(2)));

  Foliation w1 = Foliation::from_form(p2("2*y"), p2("x"));
  Foliation w2 = Foliation::from_form(p2("y^2"), p2("x^2"));
  CHECK(fol::tangency_affine(w1, w2) == p2("x*y*(2*x-y)"));

  // Tangency equals det[R; X_F; X_G] up to a unit.
  for (auto [F, G] : {std::pair{fermat(2), random_deg2(4)}, std::pair{homog(2), fermat(3)}, std::pair{w1, w2}}) {
    const auto& X = F.lift();
    const auto& Y = G.lift();
    MPoly x = p3("x"), y = p3("y"), z = p3("z");
    MPoly det = x * (X[1] * Y[2] - X[2] * Y[1]) - y * (X[0] * Y[2] - X[2] * Y[0]) + z * (X[0] * Y[1] - X[1] * Y[0]);
    MPoly T = fol::tangency_divisor(F, G);
    CHECK(T.total_degree() == F.degree() + G.degree() + 1);
    CHECK(T.monic() == det.monic());
  }
  CHECK_THROWS_AS(fol::tangency_divisor(fermat(2), fermat(2)), std::invalid_argument);
}

TEST_CASE("singular points of fermat(2)") {
  auto set = fol::singular_points(fermat(2));
  CHECK(set.complete);
  CHECK(set.total_milnor == 7);
  std::vector<ProjPoint> expect{pt(0, 0, 1), pt(1, 0, 1), pt(0, 1, 1), pt(1, 1, 1),
                                pt(1, 0, 0), pt(0, 1, 0), pt(1, 1, 0)};
  std::sort(expect.begin(), expect.end());
  REQUIRE(set.points.size() == 7);
  for (std::size_t k = 0; k < 7; ++k) {
    CHECK(set.points[k].location == expect[k]);
    CHECK(set.points[k].milnor == 1);
    CHECK(set.points[k].location.is_exact());
  }

  auto origin = fol::classify_singularity(fermat(2), pt(0, 0, 1));
  CHECK(origin.nu == 1);
  CHECK(origin.radial_order == 1);
  auto inf = fol::classify_singularity(fermat(2), pt(1, 0, 0));
  CHECK(inf.radial_order == 1);
  auto plain = fol::classify_singularity(fermat(2), pt(1, 0, 1));
  CHECK(plain.nu == 1);
  CHECK_FALSE(plain.radial_order.has_value());
  CHECK_FALSE(plain.special);

  auto sp = fol::special_singularities(fermat(2));
  std::vector<ProjPoint> rad;
  for (const auto& r : sp.radial) rad.push_back(r.location);
  std::vector<ProjPoint> rad_expect{pt(0, 0, 1), pt(1, 1, 1), pt(1, 0, 0), pt(0, 1, 0)};
  std::sort(rad_expect.begin(), rad_expect.end());
  CHECK(rad == rad_expect);
  CHECK(sp.radial_duals.size() == 4);
  CHECK_THROWS_AS(fol::classify_singularity(fermat(2), pt(2, 3, 1)), std::invalid_argument);
}

TEST_CASE("singular counts with multiplicity") {
  for (int d = 2; d <= 4; ++d) {
    auto set = fol::singular_points(fermat(d));
    CHECK(set.total_milnor == d * d + d + 1);
    CHECK(set.complete);
  }
  auto h = fol::singular_points(homog(3));
  CHECK(h.total_milnor == 13);
  for (const auto& r : h.points) {
    if (r.location.at_infinity()) continue;
    CHECK(r.location == pt(0, 0, 1));
    CHECK(r.nu == 3);
    CHECK_FALSE(r.radial_order.has_value());
    CHECK(r.special);
    CHECK(r.milnor == 9);
  }
  auto g = fol::singular_points(random_deg2(13));
  CHECK(g.total_milnor == 7);
  CHECK(g.complete);
}

TEST_CASE("classification does not depend on the chart") {
  Foliation F = fermat(3);
  for (const auto& r : fol::singular_points(F).points) {
    for (auto ch : {fol::Chart::z, fol::Chart::y, fol::Chart::x}) {
      fol::SingularityRecord other;
      try {
        other = fol::classify_singularity(F, r.location, ch);
      } catch (const std::invalid_argument&) {
        continue;  // outside this chart
      }
      CHECK(other.nu == r.nu);
      CHECK(other.radial_order == r.radial_order);
    }
  }
}

TEST_CASE("floating singular points are located") {
  // x^2 - 2 has irrational roots, so some singular points are floating.
  Foliation F = Foliation::from_vector_field(p2("x^2 - 2"), p2("y - x"));
  auto set = fol::singular_points(F);
  CHECK(set.complete);
  CHECK(set.total_milnor == 7);
  int floating = 0;
  for (const auto& r : set.points) {
    if (r.location.is_exact()) continue;
    ++floating;
    CHECK(r.classified);
    auto c = r.location.coords();
    CHECK(std::abs(c[0] * c[0] - 2.0) < 1e-12);
    CHECK(std::abs(c[1] - c[0]) < 1e-12);
  }
  CHECK(floating == 2);
}

TEST_CASE("foliation text blocks") {
  auto F = fol::parse_foliation("foliation { a = y^2; b = -x^2; }");
  CHECK(F.same_as(fol::Foliation::from_form(poly::parse_poly("y^2", {"x", "y"}), poly::parse_poly("-x^2", {"x", "y"}))));
  // A d/dx + B d/dy is the form B dx - A dy.
  auto V = fol::parse_foliation("vectorfield {\n  A = x^2 - x;\n  B = y^2 - y;\n}");
  CHECK(V.a() == poly::parse_poly("y^2 - y", {"x", "y"}));
  CHECK(V.b() == poly::parse_poly("-x^2 + x", {"x", "y"}));
  CHECK(V.degree() == 2);
  CHECK_THROWS_AS(fol::parse_foliation("foliation { a = y; }"), std::invalid_argument);
  CHECK_THROWS_AS(fol::parse_foliation("foliation { a = y; c = x; }"), std::invalid_argument);
  CHECK_THROWS_AS(fol::parse_foliation("field { A = 1; B = 1; }"), std::invalid_argument);
  CHECK_THROWS_AS(fol::parse_foliation("foliation { a = y +; b = x; }"), poly::ParseError);
}
