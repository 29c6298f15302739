#include "doctest.h"

#include <algorithm>
#include <random>

#include "webflat/elimination.hpp"
#include "webflat/numeric.hpp"
#include "webflat/upoly.hpp"
#include "webflat/webleg.hpp"

using namespace webflat;
using fol::Foliation;
using geo::LineInPlane;
using geo::ProjPoint;
using poly::GaussRat;
using poly::MPoly;
using web::WebSpec;

namespace {

const poly::VarList XY{"x", "y"};
const poly::VarList PQX{"p", "q", "x"};
const poly::VarList PQ{"p", "q"};

MPoly p2(const std::string& s) { return poly::parse_poly(s, XY); }

Foliation fermat(int d) {
  std::string e = std::to_string(d);
  return Foliation::from_vector_field(p2("x^" + e + " - x"), p2("y^" + e + " - y"), "fermat" + e);
}

Foliation homog(int d) {
  std::string e = std::to_string(d);
  return Foliation::from_form(p2("y^" + e), p2("-x^" + e), "homog" + e);
}

LineInPlane line(long a, long b, long c) { return {GaussRat(a), GaussRat(b), GaussRat(c)}; }

bool has_dual_line(const web::DiscriminantReport& rep, const ProjPoint& s) {
  return std::any_of(rep.components.begin(), rep.components.end(), [&](const web::DiscComponent& c) {
    return c.kind == web::ComponentKind::dual_line && c.line->point == s;
  });
}

ProjPoint pt(long x, long y, long z) { return ProjPoint::exact(GaussRat(x), GaussRat(y), GaussRat(z)); }

}  // namespace

TEST_CASE("implicit presentations") {
  auto F = web::implicit_presentation(fermat(2));
  CHECK(F.poly == poly::parse_poly("(y^2-y) - p*(x^2-x)", {"x", "y", "p"}));
  CHECK(F.degree_in_s == 1);
  auto R = web::implicit_presentation(Foliation::from_form(p2("-y"), p2("x")));
  CHECK(R.poly == poly::parse_poly("-y + p*x", {"x", "y", "p"}));
  auto H = web::implicit_presentation(homog(3));
  CHECK(H.poly == poly::parse_poly("y^3 - p*x^3", {"x", "y", "p"}));
  CHECK(std::string(H.slope_var()) == "p");
}

TEST_CASE("Legendre transform") {
  auto L = web::legendre(WebSpec::of(fermat(2)));
  CHECK(L.poly == poly::parse_poly("(p^2-p)*x^2 + 2*p*q*x + q^2 - q", PQX));
  CHECK(L.degree_in_s == 2);
  CHECK(std::string(L.slope_var()) == "x");

  CHECK(web::legendre_factor(line(0, 1, 0)) == poly::parse_poly("q + p*x", PQX));
  // y = 2x + 3, dual point (p0, q0) = (2, 3): (q - 3) + (p - 2) x.
  CHECK(web::legendre_factor(line(-2, 1, -3)) == poly::parse_poly("(q-3) + (p-2)*x", PQX));
  CHECK_THROWS_AS(web::legendre_factor(LineInPlane::infinity()), std::invalid_argument);

  WebSpec W = WebSpec::of(fermat(2)) * WebSpec::of(fermat(3));
  auto LW = web::legendre(W);
  CHECK(LW.degree_in_s == 5);
  CHECK(LW.poly == web::legendre(WebSpec::of(fermat(2))).poly * web::legendre(WebSpec::of(fermat(3))).poly);
}

TEST_CASE("dual web degrees") {
  CHECK(web::legendre_degree_check(WebSpec::of(fermat(2))).directions == 2);
  CHECK(web::legendre_degree_check(WebSpec::of(fermat(3)) * WebSpec::of(fermat(5))).directions == 8);
  WebSpec W = WebSpec::of(line(1, 2, 3)) * WebSpec::of(fermat(2)) * WebSpec::of(fermat(3));
  CHECK(web::legendre_degree_check(W).directions == 6);
  CHECK(W.dual_degree() == 6);
  CHECK(web::legendre_degree_check(WebSpec::of(fermat(2))).dual_degree == 2);
}

TEST_CASE("repeated components are rejected") {
  CHECK_THROWS_WITH_AS(WebSpec::of(fermat(2)) * WebSpec::of(fermat(2)),
                       doctest::Contains("identically zero discriminant"), std::invalid_argument);
  WebSpec twice{{line(1, 1, 0), line(2, 2, 0)}, {}};
  CHECK_THROWS_WITH_AS(web::legendre(twice), doctest::Contains("identically zero discriminant"),
                       std::invalid_argument);
  WebSpec inf{{LineInPlane::infinity()}, {}};
  CHECK_THROWS_AS(web::legendre(inf), std::invalid_argument);
  CHECK_THROWS_AS(web::legendre(WebSpec{}), std::invalid_argument);
}

TEST_CASE("resultant discriminant") {
  CHECK(web::discriminant_resultant(WebSpec::of(fermat(2))) == poly::parse_poly("p*q*(p+q-1)", PQ).monic());
  CHECK(web::discriminant_resultant(WebSpec::of(line(0, 1, 0))).is_constant());

  WebSpec W = WebSpec::of(fermat(2)) * WebSpec::of(line(0, 1, 0));
  MPoly D = web::discriminant_resultant(W);
  CHECK(poly::try_divide(D, poly::parse_poly("q", PQ)).has_value());
  MPoly res = poly::resultant(web::legendre_factor(fermat(2)), web::legendre_factor(line(0, 1, 0)), "x");
  CHECK(poly::try_divide(D, res.with_vars(PQX).trimmed()).has_value());

  // The factored form agrees with the discriminant of the expanded product.
  for (const WebSpec& V : {W, WebSpec::of(fermat(2)) * WebSpec::of(fermat(3)),
                           WebSpec::of(line(1, -1, 2)) * WebSpec::of(homog(2))}) {
    MPoly direct = poly::discriminant_in(web::legendre(V).poly, "x");
    CHECK(web::discriminant_resultant(V) == direct.with_vars(PQX).trimmed().monic());
  }
}

TEST_CASE("structural discriminant of fermat(2)") {
  auto rep = web::discriminant_structural(WebSpec::of(fermat(2)));
  CHECK(rep.complete);
  CHECK(rep.components.size() == 4);
  for (const auto& s : {pt(0, 0, 1), pt(1, 1, 1), pt(1, 0, 0), pt(0, 1, 0)}) CHECK(has_dual_line(rep, s));
  for (const auto& c : rep.components) CHECK(c.tag == "radial");
  auto cc = web::cross_check_discriminant(rep);
  CHECK(cc.certified);
  CHECK(cc.samples >= 200);
}

TEST_CASE("structural discriminant of products") {
  auto rep = web::discriminant_structural(WebSpec::of(fermat(2)) * WebSpec::of(fermat(3)));
  auto r2 = web::discriminant_structural(WebSpec::of(fermat(2)));
  auto r3 = web::discriminant_structural(WebSpec::of(fermat(3)));
  for (const auto* r : {&r2, &r3}) {
    for (const auto& c : r->components) CHECK(has_dual_line(rep, c.line->point));
  }
  // Points singular for both foliations contribute their dual lines too.
  CHECK(has_dual_line(rep, pt(1, 0, 1)));
  CHECK(has_dual_line(rep, pt(0, 1, 1)));
  CHECK(has_dual_line(rep, pt(1, 1, 0)));
  for (const auto& c : rep.components) {
    CHECK(c.kind == web::ComponentKind::dual_line);
    CHECK((c.tag == "radial" || c.tag == "common-singular"));
  }
  CHECK(web::cross_check_discriminant(rep).certified);

  auto hom = web::discriminant_structural(WebSpec::of(homog(3)) * WebSpec::of(homog(5)));
  bool origin = false;
  for (const auto& c : hom.components) {
    if (c.tag == "origin") {
      origin = true;
      CHECK(c.line->poly() == poly::parse_poly("q", PQ));
    }
  }
  CHECK(origin);
  CHECK(web::cross_check_discriminant(hom).certified);
}

TEST_CASE("structural discriminant with a transversal tangency") {
  Foliation w1 = Foliation::from_form(p2("2*y"), p2("x"));
  Foliation w2 = Foliation::from_form(p2("y^2"), p2("x^2"));
  auto rep = web::discriminant_structural(WebSpec::of(w1) * WebSpec::of(w2));
  int images = 0;
  for (const auto& c : rep.components) {
    if (c.kind == web::ComponentKind::gauss_image) {
      ++images;
      CHECK(c.tag == "tangency");
      CHECK(c.primal_line.has_value());
      CHECK(*c.primal_line == line(2, -1, 0));
    }
  }
  CHECK(images == 1);
  CHECK(web::cross_check_discriminant(rep).certified);

  auto lr = web::discriminant_structural(WebSpec::of(fermat(2)) * WebSpec::of(line(1, 2, 5)));
  CHECK(web::cross_check_discriminant(lr).certified);
}

TEST_CASE("cross-check negative controls") {
  auto rep = web::discriminant_structural(WebSpec::of(fermat(2)));
  auto dropped = rep;
  dropped.components.erase(dropped.components.begin());
  auto cc = web::cross_check_discriminant(dropped);
  CHECK_FALSE(cc.certified);
  REQUIRE(cc.witness.has_value());
  // The witness lies on the dropped dual line q = 0.
  CHECK(std::abs(cc.witness->second) < 1e-9);

  auto extra = rep;
  web::DiscComponent bogus;
  bogus.tag = "radial";
  bogus.line = geo::DualLine{pt(5, 7, 1)};
  extra.components.push_back(bogus);
  auto cx = web::cross_check_discriminant(extra);
  CHECK_FALSE(cx.certified);
  CHECK(cx.witness.has_value());
}

TEST_CASE("biduality on tangency data") {
  // At a generic dual point (p, q) the roots x of the dual web are the
  // tangency points of the line y = p x + q; there the primal presentation
  // vanishes with slope p.
  std::vector<Foliation> parts{fermat(2), fermat(3)};
  WebSpec W = WebSpec::of(parts[0]) * WebSpec::of(parts[1]);
  auto Ld = web::legendre(W).poly;
  MPoly primal = MPoly::constant({"x", "y", "p"}, GaussRat(1));
  for (const auto& F : parts) primal *= web::implicit_presentation(F).poly;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    std::complex<double> p(u(rng), u(rng)), q(u(rng), u(rng));
    std::vector<num::Cx<double>> co;
    for (const auto& c : Ld.coefficients_in(2)) {
      co.push_back(num::Cx<double>::from(c.eval_complex(poly::CPoint{{p, q, 0.0}, 106}).value));
    }
    auto roots = num::aberth_roots(co, 7 + k);
    REQUIRE(roots.size() == 5);
    for (auto r : roots) {
      auto x = num::newton_polish(co, r, 3).to_std();
      auto e = primal.eval_complex(poly::CPoint{{x, p * x + q, p}, 106});
      CHECK(std::abs(e.value) / e.scale < 1e-8);
    }
  }
}
