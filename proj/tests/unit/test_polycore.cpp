#include <random>

#include "doctest.h"
#include "webflat/elimination.hpp"
#include "webflat/mpoly.hpp"
#include "webflat/upoly.hpp"

using namespace webflat::poly;

namespace {

MPoly P(const char* s, const VarList& v) { return parse_poly(s, v); }

MPoly random_poly(std::mt19937_64& rng, const VarList& vars, int max_deg, int nterms, bool gaussian = false) {
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> ex(0, max_deg);
  std::vector<Term> terms;
  for (int k = 0; k < nterms; ++k) {
    std::vector<int> e(vars.size());
    int total = 0;
    for (auto& x : e) {
      x = ex(rng);
      if (total + x > max_deg) x = 0;
      total += x;
    }
    GaussRat c(Rat(coef(rng)), Rat(gaussian ? coef(rng) : 0));
    terms.push_back({Monomial::from_exponents(e), c});
  }
  return MPoly(vars, terms);
}

GaussRat random_scalar(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 5);
  return {Rat(num(rng), den(rng)), Rat(num(rng), den(rng))};
}

// Oracle: determinant of the Sylvester matrix by fraction-exact Gaussian
// elimination, using the formal degrees m = deg f, n = deg g.
GaussRat sylvester_det(const std::vector<GaussRat>& f, const std::vector<GaussRat>& g) {
  const int m = static_cast<int>(f.size()) - 1;
  const int n = static_cast<int>(g.size()) - 1;
  const int N = m + n;
  std::vector<std::vector<GaussRat>> a(N, std::vector<GaussRat>(N));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) a[r][r + k] = f[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) a[n + r][r + k] = g[n - k];
  GaussRat det(1);
  for (int c = 0; c < N; ++c) {
    int piv = -1;
    for (int r = c; r < N; ++r)
      if (!a[r][c].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) return GaussRat(0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < N; ++r) {
      if (a[r][c].is_zero()) continue;
      GaussRat f0 = a[r][c] / a[c][c];
      for (int k = c; k < N; ++k) a[r][k] -= f0 * a[c][k];
    }
  }
  return det;
}

}  // namespace

TEST_CASE("parse_poly builds the expected polynomials") {
  VarList xyp{"x", "y", "p"};
  MPoly f = P("y^2 - y - p*(x^2 - x)", xyp);
  CHECK(f.size() == 4);  // y^2, y, p*x^2, p*x
  CHECK(f.degree_in("x") == 2);
  CHECK(f.degree_in("y") == 2);
  CHECK(f.degree_in("p") == 1);
  CHECK(P("0", {"x"}).is_zero());
  CHECK(P("(x+y)^2 - x^2 - 2*x*y", {"x", "y"}) == P("y^2", {"x", "y"}));
  CHECK(P("i^2", {"x"}) == MPoly::constant({"x"}, GaussRat(-1)));
  CHECK(P("3/6*x", {"x"}).leading_coefficient() == GaussRat(Rat(1, 2)));
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_poly("x + * y", {"x", "y"});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse_poly("x + w", {"x"}), ParseError);
  CHECK_THROWS_AS(parse_poly("(x + 1", {"x"}), ParseError);
  CHECK_THROWS_AS(parse_poly("x^", {"x"}), ParseError);
  CHECK_THROWS_AS(parse_poly("", {"x"}), ParseError);
  CHECK_THROWS_AS(parse_poly("1/0", {"x"}), ParseError);
}

TEST_CASE("printing is canonical and round-trips byte-exactly") {
  VarList v{"x", "y", "z"};
  CHECK(P("x - 3*y + 2", v).to_string() == "x - 3*y + 2");
  CHECK(P("-x^2 + (1+2*i)*y + i*z - 3/2", v).to_string() == "-x^2 + (1+2*i)*y + i*z - 3/2");
  std::mt19937_64 rng(7);
  for (int k = 0; k < 60; ++k) {
    MPoly f = random_poly(rng, v, 4, 6, k % 2 == 0) * GaussRat(Rat(1, 1 + k % 5));
    std::string s = f.to_string();
    MPoly g = parse_poly(s, v);
    CHECK(g == f);
    CHECK(g.to_string() == s);
  }
}

TEST_CASE("ring operations and substitution") {
  VarList v{"x", "y", "p", "q"};
  MPoly f = P("(y^2 - y) - p*(x^2 - x)", v);
  MPoly sub = f.substitute("y", P("p*x + q", v));
  CHECK(sub == P("(p^2 - p)*x^2 + 2*p*q*x + (q^2 - q)", v));
  CHECK(exact_divide(P("x^2 - 1", v), P("x - 1", v)) == P("x + 1", v));
  CHECK(P("x", v) * P("y", v) == P("x*y", v));
  CHECK_THROWS_AS(exact_divide(P("x^2 + 1", v), P("x - 1", v)), NotDivisible);
  auto dr = divide_with_remainder(P("x^2 + 1", v), P("x - 1", v));
  CHECK(dr.remainder == P("2", v));
  // Mixed variable lists unify.
  MPoly a = P("x + 1", {"x"});
  MPoly b = P("y", {"y"});
  CHECK((a * b).vars() == VarList{"x", "y"});
  CHECK(a * b == P("x*y + y", {"x", "y"}));
}

TEST_CASE("substitute-then-evaluate equals evaluate-then-substitute") {
  std::mt19937_64 rng(11);
  VarList v{"x", "y", "t"};
  for (int k = 0; k < 100; ++k) {
    MPoly f = random_poly(rng, v, 3, 5, true);
    MPoly g = random_poly(rng, v, 2, 3, true);
    std::vector<GaussRat> pt{random_scalar(rng), random_scalar(rng), random_scalar(rng)};
    GaussRat gv = g.eval(pt);
    std::vector<GaussRat> pt2 = pt;
    pt2[1] = gv;
    CHECK(f.substitute("y", g).eval(pt) == f.eval(pt2));
  }
}

TEST_CASE("compose and partial derivatives") {
  VarList v{"x", "y"};
  MPoly f = P("x^2*y - y^3", v);
  MPoly g = f.compose({P("x + y", v), P("x - y", v)});
  CHECK(g == P("(x+y)^2*(x-y) - (x-y)^3", v));
  CHECK(f.derivative("y") == P("x^2 - 3*y^2", v));
}

TEST_CASE("resultant examples") {
  VarList v{"x", "p", "q"};
  CHECK(resultant(P("x - 1", v), P("x + 1", v), "x") == P("2", v));
  MPoly f = P("x^3 - p*x + q", v);
  CHECK(resultant(f, f, "x").is_zero());
  CHECK_THROWS_AS(resultant(P("p", v), P("q", v), "x"), std::invalid_argument);
  MPoly quad = P("(p^2 - p)*x^2 + 2*p*q*x + (q^2 - q)", v);
  MPoly r = resultant(quad, quad.derivative("x"), "x");
  // Res(f, f') = -lc * disc for a quadratic.
  CHECK(r == -P("p^2 - p", v) * P("4*p*q*(p + q - 1)", v));
}

TEST_CASE("resultant agrees with the Sylvester determinant oracle") {
  std::mt19937_64 rng(3);
  VarList v{"x", "y", "z"};
  for (int k = 0; k < 30; ++k) {
    MPoly f = random_poly(rng, v, 4, 6, k % 3 == 0);
    MPoly g = random_poly(rng, v, 3, 5, k % 3 == 1);
    if (f.degree_in("x") < 1 || g.degree_in("x") < 1) continue;
    MPoly r = resultant(f, g, "x");
    MPoly rs = resultant(g, f, "x");
    int mn = f.degree_in("x") * g.degree_in("x");
    CHECK(rs == (mn % 2 == 0 ? r : -r));
    for (int s = 0; s < 3; ++s) {
      std::vector<GaussRat> pt{GaussRat(0), random_scalar(rng), random_scalar(rng)};
      auto cf = f.coefficients_in(0);
      auto cg = g.coefficients_in(0);
      std::vector<GaussRat> fv;
      std::vector<GaussRat> gv;
      for (auto& c : cf) fv.push_back(c.eval(pt));
      for (auto& c : cg) gv.push_back(c.eval(pt));
      CHECK(r.eval(pt) == sylvester_det(fv, gv));
    }
  }
}

TEST_CASE("discriminant examples and the product rule") {
  VarList v{"x", "p", "q", "a"};
  MPoly quad = P("(p^2 - p)*x^2 + 2*p*q*x + (q^2 - q)", v);
  CHECK(discriminant_in(quad, "x") == P("4*p*q*(p + q - 1)", v));
  CHECK(discriminant_in(P("(x - a)^2", v), "x").is_zero());
  CHECK(discriminant_in(P("x^2 - 1", v), "x") == P("4", v));
  CHECK_THROWS_AS(discriminant_in(P("p + q", v), "x"), std::invalid_argument);

  std::mt19937_64 rng(5);
  VarList w{"x", "y"};
  int checked = 0;
  while (checked < 20) {
    MPoly f = random_poly(rng, w, 3, 4);
    MPoly g = random_poly(rng, w, 2, 3);
    if (f.degree_in("x") < 1 || g.degree_in("x") < 1) continue;
    MPoly lhs = discriminant_in(f * g, "x");
    MPoly rf = resultant(f, g, "x");
    MPoly rhs = discriminant_in(f, "x") * discriminant_in(g, "x") * rf * rf;
    if (rhs.is_zero()) {
      CHECK(lhs.is_zero());
    } else {
      CHECK(try_divide(lhs, rhs).has_value());
      CHECK(lhs == rhs);
    }
    ++checked;
  }
}

TEST_CASE("gcd and squarefree parts") {
  VarList v{"x", "y", "z"};
  CHECK(gcd(P("x^2 - 1", v), P("x^2 - 2*x + 1", v)) == P("x - 1", v));
  CHECK(gcd(P("x*y^2 - y^2", v), P("y*x^2 - y", v)) == P("x*y - y", v));
  CHECK(gcd(P("x + y", v), P("x - y", v)) == P("1", v));
  CHECK(squarefree(P("x^2*y", v)) == P("x*y", v));
  MPoly six = P("x*y*z*(x - z)*(y - z)*(x - y)", v);
  CHECK(squarefree(six) == six);
  CHECK(squarefree(P("(x - y)^3*(x + z)^2*z", v)) == P("(x - y)*(x + z)*z", v));
  CHECK(squarefree_in(P("x^2*y^2", v), "x") == P("x", v));

  std::mt19937_64 rng(9);
  for (int k = 0; k < 10; ++k) {
    MPoly a = random_poly(rng, v, 2, 3);
    MPoly b = random_poly(rng, v, 2, 3);
    if (a.is_constant() || b.is_constant()) continue;
    MPoly f = a * a * b;
    MPoly s = squarefree(f);
    // gcd(s, ds/dv) can only keep factors free of v (e.g. s = xy, v = x).
    MPoly all = s;
    for (int var = 0; var < 3; ++var) {
      if (s.degree_in(var) <= 0) continue;
      CHECK(gcd(s, s.derivative(var)).degree_in(var) == 0);
      all = gcd(all, s.derivative(var));
    }
    CHECK(all.is_constant());
  }
}

TEST_CASE("homogenize and dehomogenize") {
  MPoly f = P("x^2 - x", {"x"});
  MPoly h = f.homogenize("z", 2);
  CHECK(h == P("x^2 - x*z", {"x", "z"}));
  CHECK(h.dehomogenize("z") == f);
  CHECK(P("y - x", {"x", "y"}).homogenize("z", 2) == P("y*z - x*z", {"x", "y", "z"}));
  CHECK_THROWS_AS(f.homogenize("z", 1), std::invalid_argument);
}

TEST_CASE("floating evaluation with error bounds") {
  VarList v{"p", "q"};
  auto r = P("p^2 - p", v).eval_complex({{{2.0, 0.0}, {0.0, 0.0}}, 53});
  CHECK(r.value == std::complex<double>(2.0, 0.0));
  auto d = P("4*p*q*(p + q - 1)", v).eval_complex({{{1.0, 0.0}, {1.0, 0.0}}, 53});
  CHECK(std::abs(d.value - 4.0) <= d.error_bound);
  CHECK(d.error_bound <= 1e-12 * 4.0);
  auto z = P("4*p*q*(p + q - 1)", v).eval_complex({{{0.3, 0.7}, {0.0, 0.0}}, 53});
  CHECK(std::abs(z.value) <= z.error_bound);
  auto dd = P("(p - 1/3)^5", v).eval_complex({{{1.0 / 3.0, 0.0}, {0.0, 0.0}}, 106});
  CHECK(std::abs(dd.value) <= dd.error_bound + 1e-30);
  CHECK(dd.error_bound < 1e-28);
}

TEST_CASE("univariate squarefree decomposition and root recognition") {
  VarList v{"t"};
  MPoly f = P("(t - 1/2)^3*(t - i)^2*(t^2 + 1)*(t^2 - 2)", v);
  UPoly u = UPoly::from_mpoly(f, 0);
  auto sq = squarefree_decomposition(u);
  UPoly prod({GaussRat(1)});
  for (auto& [s, k] : sq)
    for (int j = 0; j < k; ++j) prod = prod * s;
  CHECK(prod == u.monic());
  auto roots = roots_with_multiplicity(u);
  int total = 0;
  int exact = 0;
  for (auto& r : roots) {
    total += r.multiplicity;
    if (r.exact) exact += r.multiplicity;
  }
  CHECK(total == 9);
  CHECK(exact == 7);  // 1/2 (x3), i (x3 with t^2+1), -i; sqrt 2 stays floating
  auto ex = exact_roots(u);
  bool found_i3 = false;
  for (auto& [r, k] : ex)
    if (r == GaussRat::unit_i() && k == 3) found_i3 = true;
  CHECK(found_i3);
}
