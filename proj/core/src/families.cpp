#include "webflat/families.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace webflat::fam {

using poly::MPoly;
using poly::Rat;

namespace {

const poly::VarList& xy() {
  static const poly::VarList v{"x", "y"};
  return v;
}

MPoly parse(const std::string& s) { return poly::parse_poly(s, xy()); }

std::string strength_of(bool floating) { return floating ? "certified-floating" : "exact"; }

// Small rationals with a bias towards integers and many zeros.
GaussRat draw(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 3);
  return GaussRat(Rat(num(rng), den(rng)));
}

MPoly random_poly(std::mt19937_64& rng, int lo, int hi) {
  std::vector<poly::Term> terms;
  for (int deg = lo; deg <= hi; ++deg) {
    for (int i = 0; i <= deg; ++i) {
      GaussRat c = draw(rng);
      if (c.is_zero()) continue;
      const int e[2] = {i, deg - i};
      terms.push_back({poly::Monomial::from_exponents(e), c});
    }
  }
  return MPoly(xy(), terms);
}

Hypothesis lines_invariant(const std::vector<LineInPlane>& lines, const std::vector<Foliation>& fs) {
  Hypothesis h{"listed lines invariant by every foliation", true, "exact", ""};
  for (const auto& l : lines) {
    if (!l.is_exact()) h.strength = strength_of(true);
    for (const auto& F : fs) {
      auto t = fol::is_invariant(F, l);
      if (t == fol::Tri::yes) continue;
      h.passed = false;
      if (t == fol::Tri::inconclusive) h.strength = "inconclusive";
      h.detail += l.to_string() + " not invariant by " + F.label() + "; ";
    }
  }
  return h;
}

Hypothesis pairwise_tangency(const std::vector<Foliation>& fs, bool allow_infinity) {
  Hypothesis h{allow_infinity ? "pairwise tangency is the line at infinity and common invariant lines"
                              : "pairwise tangency is made of common invariant lines",
               true, "exact", ""};
  std::vector<LineInPlane> allowed;
  if (allow_infinity) allowed.push_back(LineInPlane::infinity());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      auto t = tangency_lines(fs[i], fs[j], allowed);
      if (t.floating) h.strength = strength_of(true);
      if (!t.lines_only || !t.invariant) {
        h.passed = false;
        h.detail += "Tang(" + fs[i].label() + ", " + fs[j].label() + "): " + t.detail + "; ";
      }
    }
  }
  return h;
}

Hypothesis convexity_of(const std::vector<Foliation>& fs, bool reduced) {
  Hypothesis h{reduced ? "foliations convex reduced" : "foliations convex", true, "exact", ""};
  for (const auto& F : fs) {
    auto rep = fol::convexity(F);
    if (rep.factorization.floating_degree > 0) h.strength = strength_of(true);
    fol::Tri t = reduced ? rep.reduced : rep.convex;
    if (t == fol::Tri::yes) continue;
    h.passed = false;
    if (t == fol::Tri::inconclusive) h.strength = "inconclusive";
    h.detail += F.label() + (reduced ? " not convex reduced; " : " not convex; ");
  }
  return h;
}

std::string label_list(const std::vector<Foliation>& fs) {
  std::string s;
  for (const auto& F : fs) s += (s.empty() ? "" : ", ") + F.label();
  return s;
}

WebSpec assemble(const std::vector<LineInPlane>& lines, const std::vector<Foliation>& fs) {
  WebSpec W{lines, fs};
  W.validate();
  return W;
}

}  // namespace

Foliation fermat(int d) {
  if (d < 2) throw std::invalid_argument("fermat(d) needs d >= 2");
  const std::string e = std::to_string(d);
  return Foliation::from_vector_field(parse("x^" + e + " - x"), parse("y^" + e + " - y"), "fermat:" + e);
}

Foliation homogeneous(int d) {
  if (d < 2) throw std::invalid_argument("homogeneous(d) needs d >= 2");
  const std::string e = std::to_string(d);
  return Foliation::from_form(parse("y^" + e), parse("-x^" + e), "homog:" + e);
}

WebSpec ex3(const GaussRat& lambda) {
  if (lambda.is_zero()) throw std::invalid_argument("ex3 needs lambda != 0");
  MPoly x = MPoly::variable(xy(), "x"), y = MPoly::variable(xy(), "y");
  Foliation w1 = Foliation::from_form(MPoly::constant(xy(), lambda) * y, x, "ex3:w1");
  Foliation w2 = Foliation::from_form(y * y, x * x, "ex3:w2");
  LineInPlane T(lambda, GaussRat(-1), GaussRat(0));
  for (const auto* F : {&w1, &w2}) {
    if (fol::is_invariant(*F, T) == fol::Tri::yes) {
      throw std::invalid_argument("ex3: the tangency line " + T.to_string() + " is invariant by " + F->label());
    }
  }
  return WebSpec{{}, {w1, w2}};
}

Foliation random_foliation(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_foliation needs d >= 1");
  std::mt19937_64 rng(seed);
  MPoly x = MPoly::variable(xy(), "x"), y = MPoly::variable(xy(), "y");
  for (int attempt = 0; attempt < 64; ++attempt) {
    MPoly a = random_poly(rng, 0, d);
    MPoly b = random_poly(rng, 0, d);
    MPoly g = random_poly(rng, d, d);
    if (g.is_zero()) continue;
    try {
      Foliation F = Foliation::from_form(a + y * g, b - x * g,
                                         "rand:" + std::to_string(d) + ":" + std::to_string(seed));
      if (F.degree() == d) return F;
    } catch (const std::invalid_argument&) {
      // Degenerate draw (e.g. a common factor took everything); draw again.
    }
  }
  throw std::runtime_error("random_foliation: no nondegenerate draw");
}

LineInPlane line(const GaussRat& a, const GaussRat& b, const GaussRat& c) { return LineInPlane(a, b, c); }

bool Scenario::all_passed() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis& h) { return h.passed; });
}

TangencyLines tangency_lines(const Foliation& F, const Foliation& G, const std::vector<LineInPlane>& allowed) {
  TangencyLines out;
  MPoly T = fol::tangency_divisor(F, G);
  auto fact = fol::factor_lines(T);
  out.factors = fact.factors;
  out.floating = fact.floating_degree > 0;
  out.lines_only = fact.fully_split;
  out.reduced = fact.fully_split;
  out.invariant = true;
  if (!fact.fully_split) out.detail = "non-linear residual " + fact.residual.to_string();
  for (const auto& f : fact.factors) {
    if (f.multiplicity > 1) out.reduced = false;
    if (std::find(allowed.begin(), allowed.end(), f.line) != allowed.end()) continue;
    bool inv = fol::is_invariant(F, f.line) == fol::Tri::yes && fol::is_invariant(G, f.line) == fol::Tri::yes;
    if (!inv) {
      out.invariant = false;
      out.detail += (out.detail.empty() ? "" : ", ") + f.line.to_string() + " is not invariant by both";
    }
  }
  return out;
}

Scenario theoremA_scenario(const std::vector<LineInPlane>& lines, const std::vector<Foliation>& fs) {
  Scenario s;
  s.web = assemble(lines, fs);
  s.hypotheses.push_back(convexity_of(fs, true));
  s.hypotheses.push_back(pairwise_tangency(fs, false));
  s.hypotheses.push_back(lines_invariant(lines, fs));
  for (auto& h : s.hypotheses) {
    if (h.detail.empty()) h.detail = label_list(fs);
  }
  return s;
}

Scenario theoremB_scenario(const std::vector<LineInPlane>& lines, const std::vector<Foliation>& fs) {
  Scenario s;
  s.web = assemble(lines, fs);
  Hypothesis hom{"foliations homogeneous", true, "exact", ""};
  for (const auto& F : fs) {
    if (!F.is_homogeneous()) {
      hom.passed = false;
      hom.detail += F.label() + " is not homogeneous; ";
    }
  }
  s.hypotheses.push_back(hom);
  s.hypotheses.push_back(convexity_of(fs, false));
  s.hypotheses.push_back(pairwise_tangency(fs, true));
  s.hypotheses.push_back(lines_invariant(lines, fs));
  for (auto& h : s.hypotheses) {
    if (h.detail.empty()) h.detail = label_list(fs);
  }
  return s;
}

}  // namespace webflat::fam
