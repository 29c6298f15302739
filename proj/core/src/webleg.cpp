#include "webflat/webleg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "webflat/elimination.hpp"
#include "webflat/numeric.hpp"
#include "webflat/upoly.hpp"

namespace webflat::web {

using fol::Tri;
using geo::ProjPoint;
using poly::GaussRat;
using poly::Rat;
using poly::VarList;
using Cplx = std::complex<double>;

namespace {

const VarList& pqx_vars() {
  static const VarList v{"p", "q", "x"};
  return v;
}

const VarList& pq_vars() {
  static const VarList v{"p", "q"};
  return v;
}

const VarList& xy_vars() {
  static const VarList v{"x", "y"};
  return v;
}

// Some GaussRat point of the plane where no dual factor degenerates.
GaussRat small_rat(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-40, 40);
  std::uniform_int_distribution<int> den(1, 9);
  return GaussRat(Rat(num(rng), den(rng)));
}

double rel(Cplx v, double scale) { return scale > 0 ? std::abs(v) / scale : std::abs(v); }

}  // namespace

int WebSpec::dual_degree() const {
  int k = static_cast<int>(lines.size());
  for (const auto& F : foliations) k += F.degree();
  return k;
}

std::string WebSpec::describe() const {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " x ";
    first = false;
  };
  for (const auto& l : lines) {
    sep();
    os << "line{" << l.to_string() << "}";
  }
  for (const auto& F : foliations) {
    sep();
    os << (F.label().empty() ? "foliation" : F.label()) << "(d=" << F.degree() << ")";
  }
  return os.str();
}

void WebSpec::validate() const {
  if (lines.empty() && foliations.empty()) throw std::invalid_argument("empty web");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].is_infinity()) {
      throw std::invalid_argument("the line at infinity has no Legendre transform in the affine dual chart");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (lines[i] == lines[j]) {
        throw std::invalid_argument("identically zero discriminant: line " + lines[i].to_string() + " repeated");
      }
    }
  }
  for (std::size_t i = 0; i < foliations.size(); ++i) {
    if (foliations[i].degree() < 1) throw std::invalid_argument("degree-0 foliations have no dual directions");
    for (std::size_t j = 0; j < i; ++j) {
      if (foliations[i].same_as(foliations[j])) {
        throw std::invalid_argument("identically zero discriminant: foliation repeated");
      }
    }
  }
}

WebSpec operator*(const WebSpec& a, const WebSpec& b) {
  WebSpec out = a;
  out.lines.insert(out.lines.end(), b.lines.begin(), b.lines.end());
  out.foliations.insert(out.foliations.end(), b.foliations.begin(), b.foliations.end());
  out.validate();
  return out;
}

ImplicitWeb implicit_presentation(const Foliation& F) {
  const VarList v{"x", "y", "p"};
  MPoly p = MPoly::variable(v, "p");
  MPoly f = F.a().with_vars(v) + p * F.b().with_vars(v);
  return {f, Convention::primal, f.degree_in("p")};
}

MPoly legendre_factor(const Foliation& F) {
  const VarList& v = pqx_vars();
  MPoly p = MPoly::variable(v, "p"), q = MPoly::variable(v, "q"), x = MPoly::variable(v, "x");
  std::vector<MPoly> img{x, p * x + q};
  return F.a().compose(img) + p * F.b().compose(img);
}

MPoly legendre_factor(const LineInPlane& l) {
  if (l.is_infinity()) {
    throw std::invalid_argument("the line at infinity has no Legendre transform in the affine dual chart");
  }
  if (!l.is_exact()) throw std::invalid_argument("Legendre factors need exact line coefficients");
  auto c = l.exact_coeffs();
  if (!c[1].is_zero()) {
    GaussRat inv = c[1].inverse();
    for (auto& v : c) v *= inv;
  }
  const VarList& v = pqx_vars();
  MPoly p = MPoly::variable(v, "p"), q = MPoly::variable(v, "q"), x = MPoly::variable(v, "x");
  return (MPoly::constant(v, c[0]) + p * c[1]) * x + q * c[1] + MPoly::constant(v, c[2]);
}

std::vector<MPoly> legendre_factors(const WebSpec& W) {
  std::vector<MPoly> out;
  for (const auto& l : W.lines) out.push_back(legendre_factor(l));
  for (const auto& F : W.foliations) out.push_back(legendre_factor(F));
  return out;
}

ImplicitWeb legendre(const WebSpec& W) {
  W.validate();
  MPoly prod = MPoly::constant(pqx_vars(), GaussRat(1));
  for (const auto& f : legendre_factors(W)) prod *= f;
  // A nonzero discriminant value at one point proves squarefreeness in x.
  std::mt19937_64 rng(0x1e9);
  bool squarefree = false;
  for (int attempt = 0; attempt < 6 && !squarefree; ++attempt) {
    MPoly s = prod.eval_var(0, small_rat(rng)).eval_var(1, small_rat(rng));
    auto u = poly::UPoly::from_mpoly(s, 2);
    if (u.degree() != prod.degree_in(2)) continue;
    squarefree = poly::UPoly::gcd(u, u.derivative()).degree() == 0;
  }
  if (!squarefree && !poly::discriminant_in(prod, "x").is_zero()) squarefree = true;
  if (!squarefree) throw std::invalid_argument("identically zero discriminant: the dual web is not reduced");
  return {prod, Convention::dual, prod.degree_in(2)};
}

WebDegree legendre_degree_check(const WebSpec& W) {
  ImplicitWeb L = legendre(W);
  WebDegree d;
  d.directions = L.degree_in_s;
  for (const auto& c : L.poly.coefficients_in(2)) d.dual_degree = std::max(d.dual_degree, c.total_degree());
  return d;
}

MPoly FactoredDiscriminant::expand() const {
  MPoly out = MPoly::constant(pq_vars(), GaussRat(1));
  for (const auto& [f, e] : factors) out *= f.pow(static_cast<unsigned>(e));
  return out.monic();
}

FactoredDiscriminant discriminant_factors(const WebSpec& W) {
  W.validate();
  auto fs = legendre_factors(W);
  FactoredDiscriminant out;
  auto keep = [&](const MPoly& f, int e) {
    if (f.is_zero()) throw std::invalid_argument("identically zero discriminant");
    if (f.is_constant()) return;
    out.factors.emplace_back(f.with_vars(pqx_vars()).trimmed().with_vars(pq_vars()).monic(), e);
  };
  for (const auto& f : fs) {
    if (f.degree_in("x") >= 2) keep(poly::discriminant_in(f, "x"), 1);
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = i + 1; j < fs.size(); ++j) keep(poly::resultant(fs[i], fs[j], "x"), 2);
  }
  return out;
}

MPoly discriminant_resultant(const WebSpec& W) { return discriminant_factors(W).expand(); }

std::string DiscComponent::to_string() const {
  if (kind == ComponentKind::dual_line) return "dual{" + line->point.to_string() + "} [" + tag + "]";
  std::string what = at_infinity ? "L_inf" : primal_line ? primal_line->to_string() : curve.to_string();
  return "G_" + std::to_string(foliation) + "{" + what + "} [" + tag + "]";
}

// ---------------------------------------------------------------------------
// Structural prediction

namespace {

struct Assembler {
  DiscriminantReport& rep;
  const WebSpec& W;

  void add_line(const ProjPoint& s, const std::string& tag) {
    for (const auto& c : rep.components) {
      if (c.kind != ComponentKind::dual_line) continue;
      const ProjPoint& t = c.line->point;
      bool same = (s.is_exact() && t.is_exact()) ? s == t : s.distance(t) < 1e-8;
      if (same) return;
    }
    DiscComponent c;
    c.kind = ComponentKind::dual_line;
    c.tag = tag;
    c.line = geo::DualLine{s};
    rep.components.push_back(c);
  }

  // Gauss image under foliation i of the homogeneous curve H (over x, y, z).
  void add_curve(int i, const MPoly& H, const std::string& tag) {
    const Foliation& F = W.foliations[i];
    int k = H.min_degree_in(H.var_index("z"));
    if (k > 0 && fol::is_invariant(F, LineInPlane::infinity()) != Tri::yes) add_infinity(i, tag);
    MPoly rest = H;
    if (k > 0) {
      MPoly zk = MPoly::variable(H.vars(), "z").pow(static_cast<unsigned>(k));
      rest = poly::exact_divide(H, zk);
    }
    MPoly affine = rest.dehomogenize("z").with_vars(xy_vars());
    if (affine.is_constant()) return;
    DiscComponent c;
    c.kind = ComponentKind::gauss_image;
    c.tag = tag;
    c.foliation = i;
    c.curve = affine;
    rep.components.push_back(c);
  }

  void add_infinity(int i, const std::string& tag) {
    for (const auto& c : rep.components) {
      if (c.kind == ComponentKind::gauss_image && c.at_infinity && c.foliation == i) return;
    }
    DiscComponent c;
    c.kind = ComponentKind::gauss_image;
    c.tag = tag;
    c.foliation = i;
    c.at_infinity = true;
    rep.components.push_back(c);
  }

  void add_line_image(int i, const LineInPlane& l, const std::string& tag) {
    if (l.is_infinity()) {
      add_infinity(i, tag);
      return;
    }
    for (const auto& c : rep.components) {
      if (c.primal_line && c.foliation == i && c.primal_line->distance(l) < 1e-9) return;
    }
    DiscComponent c;
    c.kind = ComponentKind::gauss_image;
    c.tag = tag;
    c.foliation = i;
    c.primal_line = l;
    if (l.is_exact()) c.curve = l.poly().dehomogenize("z").with_vars(xy_vars());
    rep.components.push_back(c);
  }
};

}  // namespace

DiscriminantReport discriminant_structural(const WebSpec& W) {
  W.validate();
  DiscriminantReport rep;
  rep.resultant = discriminant_factors(W);
  rep.foliations = W.foliations;
  Assembler as{rep, W};
  const int n = static_cast<int>(W.foliations.size());
  std::vector<fol::SingularSet> sing;
  for (const auto& F : W.foliations) {
    rep.foliation_duals.push_back(legendre_factor(F));
    sing.push_back(fol::singular_points(F));
    if (!sing.back().complete) rep.complete = false;
  }
  const ProjPoint origin = ProjPoint::affine(GaussRat(0), GaussRat(0));

  for (int i = 0; i < n; ++i) {
    const Foliation& F = W.foliations[i];
    for (const auto& r : sing[i].points) {
      if (!r.classified) {
        rep.complete = false;
        continue;
      }
      if (!r.special) continue;
      std::string tag = r.radial_order ? "radial" : "special";
      if (F.is_homogeneous() && r.location == origin) tag = "origin";
      as.add_line(r.location, tag);
    }
    auto conv = fol::convexity(F);
    for (const auto& l : conv.non_invariant_lines) as.add_line_image(i, l, "inflection");
    for (const auto& f : conv.factorization.factors) {
      if (fol::is_invariant(F, f.line) == Tri::inconclusive) as.add_line_image(i, f.line, "inflection");
    }
    if (!conv.factorization.fully_split) as.add_curve(i, conv.factorization.residual, "inflection");
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (const auto& a : sing[i].points) {
        for (const auto& b : sing[j].points) {
          bool same = (a.location.is_exact() && b.location.is_exact()) ? a.location == b.location
                                                                      : a.location.distance(b.location) < 1e-8;
          if (same) as.add_line(a.location, "common-singular");
        }
      }
      MPoly T = fol::tangency_divisor(W.foliations[i], W.foliations[j]);
      auto fact = fol::factor_lines(T);
      for (const auto& f : fact.factors) {
        if (fol::is_invariant(W.foliations[i], f.line) == Tri::yes) continue;
        if (fol::is_invariant(W.foliations[j], f.line) == Tri::yes) continue;
        as.add_line_image(i, f.line, "tangency");
      }
      if (!fact.fully_split) as.add_curve(i, fact.residual, "tangency");
    }
  }

  for (const auto& l : W.lines) {
    for (int i = 0; i < n; ++i) {
      for (const auto& r : sing[i].points) {
        if (l.contains(r.location, 1e-9)) as.add_line(r.location, "line-singular");
      }
      if (fol::is_invariant(W.foliations[i], l) != Tri::yes) as.add_line_image(i, l, "line-tangency");
    }
  }
  for (std::size_t a = 0; a < W.lines.size(); ++a) {
    for (std::size_t b = a + 1; b < W.lines.size(); ++b) {
      as.add_line(geo::intersection(W.lines[a], W.lines[b]), "line-line");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cross-check

namespace {

Cplx eval_pq(const MPoly& f, Cplx p, Cplx q, double* scale) {
  auto r = f.eval_complex(poly::CPoint{{p, q}, 106});
  if (scale != nullptr) *scale = r.scale;
  return r.value;
}

// Smallest relative value of the discriminant factors at (p, q).
double disc_residual(const FactoredDiscriminant& D, Cplx p, Cplx q) {
  double best = 1.0;
  for (const auto& [f, e] : D.factors) {
    double s = 0.0;
    Cplx v = eval_pq(f, p, q, &s);
    best = std::min(best, rel(v, s));
  }
  return best;
}

// Roots in x of a dual factor at (p, q), dropping negligible leading terms.
std::vector<Cplx> dual_roots(const MPoly& Fd, Cplx p, Cplx q, double* lead_rel) {
  auto co = Fd.coefficients_in(2);
  std::vector<num::Cx<double>> c;
  double big = 0.0;
  std::vector<double> scales;
  for (const auto& k : co) {
    auto r = k.eval_complex(poly::CPoint{{p, q, 0.0}, 106});
    c.push_back(num::Cx<double>::from(r.value));
    scales.push_back(r.scale);
    big = std::max(big, std::abs(r.value));
  }
  if (lead_rel != nullptr) *lead_rel = c.empty() ? 0.0 : rel(c.back().to_std(), scales.back());
  while (c.size() > 1 && std::abs(c.back().to_std()) <= 1e-12 * big) c.pop_back();
  std::vector<Cplx> out;
  if (c.size() < 2) return out;
  for (auto z : num::aberth_roots(c, 0xab)) out.push_back(num::newton_polish(c, z, 3).to_std());
  return out;
}

bool covers(const DiscriminantReport& rep, const DiscComponent& c, Cplx p, Cplx q) {
  if (c.kind == ComponentKind::dual_line) {
    const auto& v = c.line->point.coords();
    Cplx val = v[0] * p + v[2] * q - v[1];
    double scale = std::abs(v[0]) * std::abs(p) + std::abs(v[2]) * std::abs(q) + std::abs(v[1]);
    return rel(val, scale) <= 1e-8;
  }
  const MPoly& Fd = rep.foliation_duals[c.foliation];
  double lead = 1.0;
  auto roots = dual_roots(Fd, p, q, &lead);
  if (c.at_infinity) return lead <= 1e-7;
  for (Cplx x : roots) {
    Cplx y = p * x + q;
    if (c.primal_line) {
      const auto& l = c.primal_line->coeffs();
      Cplx v = l[0] * x + l[1] * y + l[2];
      if (rel(v, std::abs(l[0] * x) + std::abs(l[1] * y) + std::abs(l[2])) <= 1e-6) return true;
      continue;
    }
    auto r = c.curve.eval_complex(poly::CPoint{{x, y}, 106});
    if (rel(r.value, r.scale) <= 1e-6) return true;
  }
  return false;
}

// Points of a primal curve (or the line at infinity) to test Gauss images.
std::vector<ProjPoint> curve_samples(const DiscComponent& c, std::mt19937_64& rng) {
  std::vector<ProjPoint> out;
  for (int k = 0; k < 3; ++k) {
    GaussRat t = small_rat(rng);
    if (c.at_infinity) {
      out.push_back(ProjPoint::exact(GaussRat(1), t, GaussRat(0)));
      continue;
    }
    if (c.primal_line && !c.primal_line->is_exact()) {
      auto sp = c.primal_line->spanning_points();
      const auto &a = sp[0].coords(), &b = sp[1].coords();
      Cplx w = t.to_complex();
      out.push_back(ProjPoint::floating({a[0] + w * b[0], a[1] + w * b[1], a[2] + w * b[2]}));
      continue;
    }
    int var = c.curve.degree_in(1) > 0 ? 1 : 0;
    MPoly u = c.curve.eval_var(1 - var, t);
    auto roots = poly::roots_with_multiplicity(poly::UPoly::from_mpoly(u, var), 0x5a + k);
    if (roots.empty()) continue;
    const auto& r = roots.front();
    if (r.exact) {
      GaussRat xy[2];
      xy[1 - var] = t;
      xy[var] = *r.exact;
      out.push_back(ProjPoint::affine(xy[0], xy[1]));
    } else {
      Cplx xy[2];
      xy[1 - var] = t.to_complex();
      xy[var] = r.value;
      out.push_back(ProjPoint::floating({xy[0], xy[1], 1.0}));
    }
  }
  return out;
}

}  // namespace

std::vector<std::pair<Cplx, Cplx>> component_points(const DiscriminantReport& rep, const DiscComponent& c,
                                                    int count, std::uint64_t seed) {
  std::vector<std::pair<Cplx, Cplx>> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  if (c.kind == ComponentKind::dual_line) {
    const auto& v = c.line->point.coords();
    if (c.line->at_infinity()) return out;
    for (int k = 0; k < count; ++k) {
      Cplx t(u(rng), u(rng));
      if (v[2] != 0.0) {
        out.emplace_back(t, (v[1] - v[0] * t) / v[2]);
      } else {
        out.emplace_back(v[1] / v[0], t);
      }
    }
    return out;
  }
  const Foliation& F = rep.foliations[c.foliation];
  for (int round = 0; round < 4 * count && static_cast<int>(out.size()) < count; ++round) {
    for (const auto& m : curve_samples(c, rng)) {
      geo::CVec3 g;
      try {
        g = fol::gauss_map(F, m).coords();
      } catch (const std::domain_error&) {
        continue;
      }
      Cplx p, q;
      if (geo::pq_from_dual_coords(g, p, q)) out.emplace_back(p, q);
      if (static_cast<int>(out.size()) == count) break;
    }
  }
  return out;
}

CrossCheck cross_check_discriminant(const DiscriminantReport& rep, int samples, std::uint64_t seed) {
  CrossCheck out;
  const auto& D = rep.resultant;
  std::mt19937_64 rng(seed);
  auto fail = [&](Cplx p, Cplx q, std::string why) {
    out.certified = false;
    out.witness = std::make_pair(p, q);
    out.detail = std::move(why);
    return out;
  };

  // Components inside the discriminant.
  for (const auto& c : rep.components) {
    if (c.kind == ComponentKind::dual_line) {
      const ProjPoint& s = c.line->point;
      if (s.at_infinity() && std::abs(s.coords()[0]) == 0.0) continue;  // the dual chart's line at infinity
      if (s.is_exact()) {
        MPoly l = c.line->poly();
        bool divides = std::any_of(D.factors.begin(), D.factors.end(),
                                   [&](const auto& f) { return poly::try_divide(f.first, l).has_value(); });
        if (!divides) {
          const auto& v = s.coords();
          Cplx p = v[2] != 0.0 ? Cplx(0.3, 0.1) : v[1] / v[0];
          Cplx q = v[2] != 0.0 ? (v[1] - v[0] * p) / v[2] : Cplx(0.3, 0.1);
          return fail(p, q, "component " + c.to_string() + " does not divide the discriminant");
        }
        continue;
      }
      const auto& v = s.coords();
      for (double t : {0.37, -1.3, 2.1}) {
        Cplx p = v[2] != 0.0 ? Cplx(t, 0.2) : v[1] / v[0];
        Cplx q = v[2] != 0.0 ? (v[1] - v[0] * p) / v[2] : Cplx(t, 0.2);
        if (disc_residual(D, p, q) > 1e-8) return fail(p, q, "component " + c.to_string() + " off the discriminant");
      }
      continue;
    }
    // Gauss images: tangent lines at curve points must be discriminant points.
    const Foliation& F = rep.foliations[c.foliation];
    for (const auto& m : curve_samples(c, rng)) {
      geo::CVec3 g;
      try {
        g = fol::gauss_map(F, m).coords();
      } catch (const std::domain_error&) {
        continue;  // a singular point of F lies on the curve
      }
      Cplx p, q;
      if (!geo::pq_from_dual_coords(g, p, q)) continue;
      if (disc_residual(D, p, q) > 1e-7) return fail(p, q, "component " + c.to_string() + " off the discriminant");
    }
  }

  // Discriminant points explained by some component.
  std::vector<MPoly> parts;
  for (const auto& [f, e] : D.factors) parts.push_back(poly::squarefree(f));
  if (parts.empty()) {
    out.certified = true;
    out.detail = "empty discriminant";
    return out;
  }
  int taken = 0;
  for (int round = 0; taken < samples && round < 50 * samples; ++round) {
    const MPoly& g = parts[round % parts.size()];
    const int var = g.degree_in(1) > 0 ? 1 : 0;
    GaussRat t(small_rat(rng).re(), small_rat(rng).re());
    auto u = poly::UPoly::from_mpoly(g.eval_var(1 - var, t), var);
    for (const auto& r : poly::roots_with_multiplicity(u, seed + round)) {
      Cplx pq[2];
      pq[1 - var] = t.to_complex();
      pq[var] = r.value;
      bool ok = std::any_of(rep.components.begin(), rep.components.end(),
                            [&](const DiscComponent& c) { return covers(rep, c, pq[0], pq[1]); });
      if (!ok) return fail(pq[0], pq[1], "discriminant point not explained by any component");
      ++taken;
    }
  }
  out.samples = taken;
  out.certified = true;
  out.detail = "all components on the discriminant; " + std::to_string(taken) + " discriminant points explained";
  return out;
}

}  // namespace webflat::web
