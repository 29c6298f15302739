#include "webflat/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "webflat/elimination.hpp"
#include "webflat/numeric.hpp"
#include "webflat/upoly.hpp"

namespace webflat::fol {

using poly::CPoint;
using poly::Monomial;
using poly::Rat;
using poly::Term;
using poly::VarList;
using Cplx = std::complex<double>;

std::string to_string(Tri t) {
  switch (t) {
    case Tri::no: return "no";
    case Tri::yes: return "yes";
    case Tri::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Certification c) { return c == Certification::exact ? "exact" : "floating"; }

std::string to_string(Chart c) {
  switch (c) {
    case Chart::z: return "z=1";
    case Chart::y: return "y=1";
    case Chart::x: return "x=1";
  }
  return "?";
}

namespace {

const VarList& xy_vars() {
  static const VarList v{"x", "y"};
  return v;
}

const VarList& xyz_vars() {
  static const VarList v{"x", "y", "z"};
  return v;
}

// Re-expresses f over exactly `vars`, rejecting stray variables.
MPoly over(const MPoly& f, const VarList& vars) {
  MPoly g = f.trimmed();
  for (const auto& v : g.vars()) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
      throw std::invalid_argument("unexpected variable '" + v + "'");
    }
  }
  return g.with_vars(vars);
}

MPoly var(const VarList& vars, std::string_view name) { return MPoly::variable(vars, name); }

void normalize_triple(std::array<MPoly, 3>& t) {
  for (const auto& p : t) {
    if (p.is_zero()) continue;
    GaussRat inv = p.leading_coefficient().inverse();
    for (auto& q : t) q = q * inv;
    return;
  }
}

int low_degree(const MPoly& f) { return f.is_zero() ? -1 : f.terms().back().mono.degree(); }

MPoly homogeneous_part(const MPoly& f, int k) {
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    if (t.mono.degree() == k) out.push_back(t);
  }
  return MPoly(f.vars(), std::move(out));
}

CPoint cpoint(std::initializer_list<Cplx> c) { return CPoint{std::vector<Cplx>(c), 106}; }

CPoint cpoint(const geo::CVec3& v) { return CPoint{{v[0], v[1], v[2]}, 106}; }

std::vector<GaussRat> qpoint(const geo::QVec3& v) { return {v[0], v[1], v[2]}; }

double norm3(const geo::CVec3& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Foliation Foliation::from_form(const MPoly& a, const MPoly& b, std::string label) {
  MPoly a0 = over(a, xy_vars());
  MPoly b0 = over(b, xy_vars());
  if (a0.is_zero() && b0.is_zero()) throw std::invalid_argument("the zero 1-form defines no foliation");
  MPoly g = poly::gcd(a0, b0);
  if (!g.is_constant()) {
    a0 = poly::exact_divide(a0, g);
    b0 = poly::exact_divide(b0, g);
  }
  const int k = std::max(a0.total_degree(), b0.total_degree());
  const VarList& v3 = xyz_vars();
  MPoly ah = over(a0.homogenize("z", k), v3);
  MPoly bh = over(b0.homogenize("z", k), v3);
  MPoly x = var(v3, "x"), y = var(v3, "y"), z = var(v3, "z");
  std::array<MPoly, 3> t{z * ah, z * bh, -(x * ah + y * bh)};
  // Saturate against the line at infinity.
  int m = 1 << 20;
  for (const auto& p : t) {
    if (!p.is_zero()) m = std::min(m, p.min_degree_in(2));
  }
  if (m > 0) {
    MPoly zm = z.pow(static_cast<unsigned>(m));
    for (auto& p : t) p = poly::exact_divide(p, zm);
  }
  Foliation F;
  F.a_ = a0;
  F.b_ = b0;
  F.form_ = t;
  F.label_ = std::move(label);
  F.finish();
  return F;
}

Foliation Foliation::from_vector_field(const MPoly& A, const MPoly& B, std::string label) {
  return from_form(B, -A, std::move(label));
}

Foliation Foliation::from_homogeneous(const MPoly& A, const MPoly& B, const MPoly& C, std::string label) {
  const VarList& v3 = xyz_vars();
  std::array<MPoly, 3> t{over(A, v3), over(B, v3), over(C, v3)};
  int deg = -1;
  for (const auto& p : t) {
    if (p.is_zero()) continue;
    if (!p.is_homogeneous() || (deg >= 0 && p.total_degree() != deg)) {
      throw std::invalid_argument("form components must be homogeneous of one degree");
    }
    deg = p.total_degree();
  }
  if (deg < 0) throw std::invalid_argument("the zero 1-form defines no foliation");
  MPoly euler = var(v3, "x") * t[0] + var(v3, "y") * t[1] + var(v3, "z") * t[2];
  if (!euler.is_zero()) throw std::invalid_argument("form violates the Euler relation xA + yB + zC = 0");
  MPoly g = poly::gcd(poly::gcd(t[0], t[1]), t[2]);
  if (!g.is_constant()) {
    for (auto& p : t) p = poly::exact_divide(p, g);
  }
  Foliation F;
  F.a_ = over(t[0].dehomogenize("z"), xy_vars());
  F.b_ = over(t[1].dehomogenize("z"), xy_vars());
  F.form_ = t;
  F.label_ = std::move(label);
  F.finish();
  return F;
}

void Foliation::finish() {
  normalize_triple(form_);
  int deg = -1;
  for (const auto& p : form_) deg = std::max(deg, p.total_degree());
  degree_ = deg - 1;
  if (degree_ < 0) throw std::invalid_argument("constant form components define no foliation");
  const auto& [A, B, C] = form_;
  lift_ = {C.derivative(1) - B.derivative(2), A.derivative(2) - C.derivative(0), B.derivative(0) - A.derivative(1)};
}

namespace {

std::string trimmed(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Foliation parse_foliation(std::string_view text, std::string label) {
  const std::string body = trimmed(text);
  const auto open = body.find('{');
  if (open == std::string::npos || body.back() != '}') {
    throw std::invalid_argument("expected `foliation { ... }` or `vectorfield { ... }`");
  }
  const std::string head = trimmed(std::string_view(body).substr(0, open));
  const bool field = head == "vectorfield";
  if (!field && head != "foliation") throw std::invalid_argument("unknown block `" + head + "`");
  const std::string first = field ? "A" : "a", second = field ? "B" : "b";

  std::map<std::string, MPoly> got;
  std::string_view inner(body);
  inner = inner.substr(open + 1, inner.size() - open - 2);
  std::size_t pos = 0;
  while (pos <= inner.size()) {
    auto end = inner.find(';', pos);
    if (end == std::string_view::npos) end = inner.size();
    const std::string stmt = trimmed(inner.substr(pos, end - pos));
    pos = end + 1;
    if (stmt.empty()) continue;
    const auto eq = stmt.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected `key = poly` in `" + stmt + "`");
    const std::string key = trimmed(std::string_view(stmt).substr(0, eq));
    if (key != first && key != second) {
      throw std::invalid_argument("unexpected key `" + key + "` in " + head + " block");
    }
    if (got.count(key)) throw std::invalid_argument("duplicate key `" + key + "`");
    got.emplace(key, poly::parse_poly(trimmed(std::string_view(stmt).substr(eq + 1)), xy_vars()));
  }
  if (!got.count(first) || !got.count(second)) {
    throw std::invalid_argument(head + " block needs both " + first + " and " + second);
  }
  if (field) return Foliation::from_vector_field(got.at(first), got.at(second), std::move(label));
  return Foliation::from_form(got.at(first), got.at(second), std::move(label));
}

bool Foliation::is_homogeneous() const {
  int deg = -1;
  for (const auto* p : {&a_, &b_}) {
    if (p->is_zero()) continue;
    if (!p->is_homogeneous() || (deg >= 0 && p->total_degree() != deg)) return false;
    deg = p->total_degree();
  }
  return true;
}

Foliation Foliation::transformed(const geo::Mat3& T) const {
  // Covectors pull back: Omega'(v) = T^{-T} Omega(T^{-1} v).
  const geo::Mat3 inv = T.inverse();
  std::array<MPoly, 3> moved;
  for (int j = 0; j < 3; ++j) moved[j] = T.map_curve(form_[j]);
  std::array<MPoly, 3> out;
  for (int i = 0; i < 3; ++i) {
    MPoly acc(xyz_vars());
    for (int j = 0; j < 3; ++j) acc += moved[j] * inv.at(j, i);
    out[i] = acc;
  }
  return from_homogeneous(out[0], out[1], out[2], label_);
}

bool Foliation::same_as(const Foliation& other) const {
  return form_[0] == other.form_[0] && form_[1] == other.form_[1] && form_[2] == other.form_[2];
}

// ---------------------------------------------------------------------------
// Inflection divisor and Gauss map

MPoly inflection_divisor(const Foliation& F) {
  const auto& X = F.lift();
  std::array<MPoly, 3> XX;
  for (int i = 0; i < 3; ++i) {
    MPoly acc(xyz_vars());
    for (int j = 0; j < 3; ++j) acc += X[j] * X[i].derivative(j);
    XX[i] = acc;
  }
  const VarList& v3 = xyz_vars();
  std::array<MPoly, 3> R{var(v3, "x"), var(v3, "y"), var(v3, "z")};
  MPoly det = R[0] * (X[1] * XX[2] - X[2] * XX[1]) - R[1] * (X[0] * XX[2] - X[2] * XX[0]) +
              R[2] * (X[0] * XX[1] - X[1] * XX[0]);
  return det.monic();
}

ProjPoint gauss_map(const Foliation& F, const ProjPoint& p) {
  if (p.is_exact()) {
    auto pt = qpoint(p.exact_coords());
    std::array<GaussRat, 3> v;
    for (int k = 0; k < 3; ++k) v[k] = F.form()[k].eval(pt);
    if (v[0].is_zero() && v[1].is_zero() && v[2].is_zero()) {
      throw std::domain_error("Gauss map undefined at the singular point " + p.to_string());
    }
    return ProjPoint::exact(v[0], v[1], v[2]);
  }
  geo::CVec3 v;
  double scale = 0.0;
  for (int k = 0; k < 3; ++k) {
    auto r = F.form()[k].eval_complex(cpoint(p.coords()));
    v[k] = r.value;
    scale = std::max(scale, r.scale);
  }
  if (norm3(v) <= 1e-10 * std::max(scale, 1e-300)) {
    throw std::domain_error("Gauss map undefined at the singular point " + p.to_string());
  }
  return ProjPoint::floating(v);
}

// ---------------------------------------------------------------------------
// Line factors

namespace {

// |H(w)| relative to the absolute-value scale of the evaluation.
double relative_value(const MPoly& H, const geo::CVec3& w) {
  auto r = H.eval_complex(cpoint(w));
  return r.scale > 0 ? std::abs(r.value) / r.scale : std::abs(r.value);
}

geo::CVec3 combo(const geo::CVec3& p, const geo::CVec3& q, Cplx u, Cplx v) {
  return {u * p[0] + v * q[0], u * p[1] + v * q[1], u * p[2] + v * q[2]};
}

struct LinePoint {
  ProjPoint point;
  geo::CVec3 raw;  // unnormalized coordinates used for evaluation
  int multiplicity;
};

}  // namespace

DivisorFactorization factor_lines(const MPoly& Hin, std::uint64_t seed) {
  MPoly H = over(Hin, xyz_vars());
  if (H.is_zero()) throw std::invalid_argument("cannot factor the zero polynomial");
  if (!H.is_homogeneous()) throw std::invalid_argument("line factorization needs a homogeneous polynomial");
  DivisorFactorization out;
  out.residual = H;
  if (H.is_constant()) {
    out.fully_split = true;
    return out;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-7, 7);
  auto random_vec = [&] {
    return geo::QVec3{GaussRat(dist(rng)), GaussRat(dist(rng)), GaussRat(dist(rng))};
  };
  geo::QVec3 P0, Q1, Q2;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 200) throw std::runtime_error("factor_lines: no generic probe lines found");
    P0 = random_vec();
    Q1 = random_vec();
    Q2 = random_vec();
    geo::Mat3 M({P0, Q1, Q2});
    if (M.det().is_zero()) continue;
    if (H.eval(qpoint(P0)).is_zero() || H.eval(qpoint(Q1)).is_zero() || H.eval(qpoint(Q2)).is_zero()) continue;
    break;
  }

  // Restrict H to the probe line P0 + t Q and collect its intersection points.
  auto probe = [&](const geo::QVec3& Q) {
    const VarList tv{"t"};
    MPoly t = var(tv, "t");
    std::vector<MPoly> img;
    for (int k = 0; k < 3; ++k) img.push_back(MPoly::constant(tv, P0[k]) + t * Q[k]);
    poly::UPoly h = poly::UPoly::from_mpoly(H.compose(img).with_vars(tv), 0);
    std::vector<LinePoint> pts;
    for (const auto& r : poly::roots_with_multiplicity(h, seed ^ 0x9e37)) {
      if (r.exact) {
        geo::QVec3 v;
        for (int k = 0; k < 3; ++k) v[k] = P0[k] + *r.exact * Q[k];
        pts.push_back({ProjPoint::exact(v[0], v[1], v[2]),
                       {v[0].to_complex(), v[1].to_complex(), v[2].to_complex()},
                       r.multiplicity});
      } else {
        geo::CVec3 v;
        for (int k = 0; k < 3; ++k) v[k] = P0[k].to_complex() + r.value * Q[k].to_complex();
        pts.push_back({ProjPoint::floating(v), v, r.multiplicity});
      }
    }
    return pts;
  };
  const auto pts1 = probe(Q1);
  const auto pts2 = probe(Q2);

  static const Cplx kSamples[][2] = {{{0.37, 0.11}, {0.63, -0.2}},
                                     {{1.9, 0.3}, {-0.7, 0.45}},
                                     {{-0.4, 1.1}, {1.3, 0.2}},
                                     {{0.8, -0.6}, {-1.2, -0.9}}};

  std::vector<LineFactor> found;
  for (const auto& p : pts1) {
    for (const auto& q : pts2) {
      LineInPlane L = geo::join(p.point, q.point);
      bool pre = true;
      for (int s = 0; s < 2 && pre; ++s) {
        pre = relative_value(H, combo(p.raw, q.raw, kSamples[s][0], kSamples[s][1])) < 1e-8;
      }
      if (!pre) continue;
      bool dup = std::any_of(found.begin(), found.end(), [&](const LineFactor& f) {
        return f.line.distance(L) < 1e-9;
      });
      if (dup) continue;
      if (L.is_exact()) {
        MPoly l = L.poly();
        int m = 0;
        while (auto qt = poly::try_divide(out.residual, l)) {
          out.residual = *qt;
          ++m;
        }
        if (m > 0) found.push_back({L, m, Certification::exact});
      } else {
        double worst = 0.0;
        for (const auto& s : kSamples) worst = std::max(worst, relative_value(H, combo(p.raw, q.raw, s[0], s[1])));
        if (worst < 1e-10) {
          int m = std::min(p.multiplicity, q.multiplicity);
          found.push_back({L, m, Certification::floating});
          out.floating_degree += m;
        }
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const LineFactor& a, const LineFactor& b) { return a.line < b.line; });
  out.factors = std::move(found);
  out.fully_split = out.residual.is_constant() || out.residual.total_degree() == out.floating_degree;
  return out;
}

Tri is_invariant(const Foliation& F, const LineInPlane& l) {
  const auto& X = F.lift();
  if (l.is_exact()) {
    const auto& c = l.exact_coeffs();
    MPoly Xl = X[0] * c[0] + X[1] * c[1] + X[2] * c[2];
    if (Xl.is_zero()) return Tri::yes;
    return poly::try_divide(Xl, l.poly()) ? Tri::yes : Tri::no;
  }
  const auto pts = l.spanning_points();
  const auto& c = l.coeffs();
  static const Cplx kW[] = {{0.3, 0.2}, {-1.1, 0.5}, {2.3, -0.7}, {0.05, 1.3}};
  double worst = 0.0;
  for (Cplx w : kW) {
    geo::CVec3 v = combo(pts[0].coords(), pts[1].coords(), 1.0, w);
    Cplx val = 0.0;
    double scale = 0.0;
    for (int k = 0; k < 3; ++k) {
      auto r = X[k].eval_complex(cpoint(v));
      val += c[k] * r.value;
      scale += std::abs(c[k]) * r.scale;
    }
    worst = std::max(worst, scale > 0 ? std::abs(val) / scale : std::abs(val));
  }
  if (worst <= 1e-10) return Tri::yes;
  if (worst >= 1e-6) return Tri::no;
  return Tri::inconclusive;
}

std::vector<InvariantLine> invariant_lines(const Foliation& F) {
  MPoly I = inflection_divisor(F);
  std::vector<InvariantLine> out;
  if (I.is_zero()) return out;
  for (const auto& f : factor_lines(I).factors) {
    if (is_invariant(F, f.line) == Tri::yes) out.push_back({f.line, f.multiplicity, f.cert});
  }
  return out;
}

ConvexityReport convexity(const Foliation& F) {
  MPoly I = inflection_divisor(F);
  if (I.is_zero()) throw std::invalid_argument("a degree-0 foliation has no inflection divisor");
  ConvexityReport rep;
  rep.factorization = factor_lines(I);
  bool unsure = false;
  for (const auto& f : rep.factorization.factors) {
    switch (is_invariant(F, f.line)) {
      case Tri::yes: rep.lines.push_back({f.line, f.multiplicity, f.cert}); break;
      case Tri::no: rep.non_invariant_lines.push_back(f.line); break;
      case Tri::inconclusive: unsure = true; break;
    }
  }
  rep.witness = MPoly::constant(xyz_vars(), GaussRat(1));
  if (!rep.non_invariant_lines.empty()) {
    rep.convex = Tri::no;
  } else if (!rep.factorization.fully_split) {
    rep.convex = Tri::no;
    rep.witness = rep.factorization.residual;
  } else {
    rep.convex = unsure ? Tri::inconclusive : Tri::yes;
  }
  if (rep.convex == Tri::yes) {
    bool simple = std::all_of(rep.lines.begin(), rep.lines.end(), [](const InvariantLine& l) {
      return l.multiplicity == 1;
    });
    rep.reduced = simple ? Tri::yes : Tri::no;
  } else {
    rep.reduced = rep.convex;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Tangency

MPoly tangency_affine(const Foliation& F, const Foliation& G) { return F.a() * G.b() - G.a() * F.b(); }

MPoly tangency_divisor(const Foliation& F, const Foliation& G) {
  MPoly t = tangency_affine(F, G);
  if (t.is_zero()) throw std::invalid_argument("the foliations coincide; their tangency is everything");
  return over(t.homogenize("z", F.degree() + G.degree() + 1), xyz_vars());
}

// ---------------------------------------------------------------------------
// Singular points

namespace {

struct ChartZero {
  std::optional<std::array<GaussRat, 2>> exact;
  std::array<Cplx, 2> approx{};
  int multiplicity = 1;
};

Cplx eval2(const MPoly& f, Cplx u, Cplx v) { return f.eval_complex(cpoint({u, v})).value; }

// Newton refinement of a simple common zero of f, g in two variables.
std::array<Cplx, 2> polish(const MPoly& f, const MPoly& g, std::array<Cplx, 2> z) {
  const MPoly fu = f.derivative(0), fv = f.derivative(1), gu = g.derivative(0), gv = g.derivative(1);
  for (int it = 0; it < 3; ++it) {
    Cplx F = eval2(f, z[0], z[1]), G = eval2(g, z[0], z[1]);
    Cplx a = eval2(fu, z[0], z[1]), b = eval2(fv, z[0], z[1]);
    Cplx c = eval2(gu, z[0], z[1]), d = eval2(gv, z[0], z[1]);
    Cplx det = a * d - b * c;
    if (std::abs(det) == 0.0) break;
    z[0] -= (d * F - b * G) / det;
    z[1] -= (a * G - c * F) / det;
  }
  return z;
}

// Common zeros of f, g with one shear u = s + c t; nullopt when this shear
// fails to separate the zeros.
std::optional<std::vector<ChartZero>> try_shear(const MPoly& f, const MPoly& g, const GaussRat& c,
                                                std::uint64_t seed) {
  const VarList& vars = f.vars();
  MPoly s = MPoly::variable(vars, vars[0]);
  MPoly t = MPoly::variable(vars, vars[1]);
  std::vector<MPoly> img{s + t * c, t};
  MPoly F = f.compose(img);
  MPoly G = g.compose(img);
  auto constant_lc = [](const MPoly& p) {
    auto co = p.coefficients_in(1);
    return co.size() >= 2 && co.back().is_constant();
  };
  const MPoly* M = nullptr;
  const MPoly* N = nullptr;
  if (constant_lc(F)) {
    M = &F;
    N = &G;
  } else if (constant_lc(G)) {
    M = &G;
    N = &F;
  } else {
    return std::nullopt;
  }
  MPoly R = poly::resultant(F, G, vars[1]);
  if (R.is_zero()) throw std::logic_error("chart polynomials share a component");
  std::vector<ChartZero> out;
  if (R.is_constant()) return out;
  poly::UPoly r = poly::UPoly::from_mpoly(R.with_vars(vars), 0);
  const auto Mco = M->coefficients_in(1);

  for (const auto& root : poly::roots_with_multiplicity(r, seed)) {
    ChartZero z;
    z.multiplicity = root.multiplicity;
    if (root.exact) {
      const GaussRat& s0 = *root.exact;
      auto Fs = poly::UPoly::from_mpoly(F.eval_var(0, s0), 1);
      auto Gs = poly::UPoly::from_mpoly(G.eval_var(0, s0), 1);
      auto h = poly::UPoly::gcd(Fs, Gs);
      // Only the distinct points of the fibre matter.
      if (h.degree() > 1) h = poly::UPoly::divmod(h, poly::UPoly::gcd(h, h.derivative())).first;
      if (h.degree() != 1) return std::nullopt;
      GaussRat t0 = -h.coeffs()[0] / h.coeffs()[1];
      z.exact = std::array<GaussRat, 2>{s0 + c * t0, t0};
      z.approx = {(*z.exact)[0].to_complex(), (*z.exact)[1].to_complex()};
    } else {
      const Cplx s0 = root.value;
      std::vector<num::Cx<double>> co;
      for (const auto& m : Mco) co.push_back(num::Cx<double>::from(eval2(m, s0, 0.0)));
      auto ts = num::aberth_roots(co, seed + 17);
      std::vector<Cplx> keep;
      for (auto& tz : ts) {
        Cplx tv = num::newton_polish(co, tz, 4).to_std();
        auto e = N->eval_complex(cpoint({s0, tv}));
        double rel = e.scale > 0 ? std::abs(e.value) / e.scale : std::abs(e.value);
        if (rel < 1e-6) keep.push_back(tv);
      }
      if (keep.empty()) return std::nullopt;
      Cplx mean = 0.0;
      for (Cplx v : keep) mean += v;
      mean /= static_cast<double>(keep.size());
      for (Cplx v : keep) {
        if (std::abs(v - mean) > 1e-4 * (1.0 + std::abs(mean))) return std::nullopt;
      }
      z.approx = {s0 + c.to_complex() * mean, mean};
      if (z.multiplicity == 1) z.approx = polish(f, g, z.approx);
    }
    out.push_back(z);
  }
  return out;
}

std::vector<ChartZero> chart_zeros(const MPoly& f, const MPoly& g, std::uint64_t seed) {
  static const GaussRat kShears[] = {GaussRat(0),  GaussRat(1),          GaussRat(-1),         GaussRat(2),
                                     GaussRat(-2), GaussRat(3),          GaussRat(Rat(1, 2)),  GaussRat(-3),
                                     GaussRat(5),  GaussRat(Rat(-5, 2)), GaussRat(7),          GaussRat(Rat(7, 3))};
  for (const auto& c : kShears) {
    if (auto z = try_shear(f, g, c, seed)) return *z;
  }
  throw std::runtime_error("could not separate the singular points by any shear");
}

// Chart data: the two chart coordinates of a point and the chart vector field.
struct ChartField {
  MPoly P, Q;  // field P d/du + Q d/dv over the chart's two variables
};

ChartField chart_field(const Foliation& F, Chart ch) {
  const auto& [A, B, C] = F.form();
  switch (ch) {
    case Chart::z: return {-B.dehomogenize("z"), A.dehomogenize("z")};
    case Chart::y: return {-C.dehomogenize("y"), A.dehomogenize("y")};
    case Chart::x: return {-C.dehomogenize("x"), B.dehomogenize("x")};
  }
  throw std::logic_error("bad chart");
}

// Chart coordinates of a point, or nullopt if the point is outside the chart.
template <class V>
std::optional<std::array<typename V::value_type, 2>> chart_coords(const V& v, Chart ch) {
  using T = typename V::value_type;
  auto is0 = [](const T& a) {
    if constexpr (std::is_same_v<T, GaussRat>) {
      return a.is_zero();
    } else {
      return std::abs(a) < 1e-12;
    }
  };
  switch (ch) {
    case Chart::z:
      if (is0(v[2])) return std::nullopt;
      return std::array<T, 2>{v[0] / v[2], v[1] / v[2]};
    case Chart::y:
      if (is0(v[1])) return std::nullopt;
      return std::array<T, 2>{v[0] / v[1], v[2] / v[1]};
    case Chart::x:
      if (is0(v[0])) return std::nullopt;
      return std::array<T, 2>{v[1] / v[0], v[2] / v[0]};
  }
  return std::nullopt;
}

std::vector<MPoly> shift_images(const VarList& vars, const GaussRat& u0, const GaussRat& v0) {
  return {MPoly::variable(vars, vars[0]) + MPoly::constant(vars, u0),
          MPoly::variable(vars, vars[1]) + MPoly::constant(vars, v0)};
}

void classify_exact(const ChartField& cf, const std::array<GaussRat, 2>& p0, SingularityRecord& rec) {
  auto img = shift_images(cf.P.vars(), p0[0], p0[1]);
  MPoly P = cf.P.compose(img);
  MPoly Q = cf.Q.compose(img);
  if (low_degree(P) == 0 || low_degree(Q) == 0) {
    throw std::invalid_argument("not a singular point of the foliation");
  }
  int nu = std::min(P.is_zero() ? 1 << 20 : low_degree(P), Q.is_zero() ? 1 << 20 : low_degree(Q));
  rec.nu = nu;
  const VarList& vars = P.vars();
  MPoly u = MPoly::variable(vars, vars[0]);
  MPoly v = MPoly::variable(vars, vars[1]);
  MPoly cone = u * homogeneous_part(Q, nu) - v * homogeneous_part(P, nu);
  if (cone.is_zero()) {
    rec.radial_order = nu;
    MPoly full = u * Q - v * P;
    if (!full.is_zero()) rec.contact_order = low_degree(full) - 1;
  } else {
    rec.contact_order = nu;
  }
  rec.special = nu >= 2 || rec.radial_order.has_value();
}

// Floating jets: expanded coefficients of f(u0 + u, v0 + v) with the absolute
// sum of contributions, for cancellation-aware zero tests.
struct JetEntry {
  Cplx value = 0.0;
  double mag = 0.0;
};
using Jet = std::map<std::pair<int, int>, JetEntry>;

Jet shifted_jet(const MPoly& f, Cplx u0, Cplx v0) {
  Jet jet;
  int maxdeg = std::max(0, f.total_degree());
  std::vector<std::vector<double>> binom(maxdeg + 1, std::vector<double>(maxdeg + 1, 0.0));
  for (int n = 0; n <= maxdeg; ++n) {
    binom[n][0] = 1.0;
    for (int k = 1; k <= n; ++k) binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0.0);
  }
  for (const auto& t : f.terms()) {
    const int a = t.mono.exponent(0), b = t.mono.exponent(1);
    const Cplx c = t.coef.to_complex();
    for (int i = 0; i <= a; ++i) {
      for (int j = 0; j <= b; ++j) {
        Cplx w = c * binom[a][i] * binom[b][j] * std::pow(u0, a - i) * std::pow(v0, b - j);
        auto& e = jet[{i, j}];
        e.value += w;
        e.mag += std::abs(w);
      }
    }
  }
  return jet;
}

enum class Sign { zero, nonzero, unclear };

void classify_floating(const ChartField& cf, const std::array<Cplx, 2>& p0, SingularityRecord& rec) {
  Jet P = shifted_jet(cf.P, p0[0], p0[1]);
  Jet Q = shifted_jet(cf.Q, p0[0], p0[1]);
  double scale = 0.0;
  for (const auto* j : {&P, &Q}) {
    for (const auto& [k, e] : *j) scale = std::max(scale, e.mag);
  }
  auto sign = [&](Cplx v) {
    if (std::abs(v) <= 1e-9 * scale) return Sign::zero;
    if (std::abs(v) >= 1e-6 * scale) return Sign::nonzero;
    return Sign::unclear;
  };
  auto at = [](const Jet& j, int a, int b) {
    if (a < 0 || b < 0) return Cplx(0.0);
    auto it = j.find({a, b});
    return it == j.end() ? Cplx(0.0) : it->second.value;
  };
  const int maxdeg = std::max(cf.P.total_degree(), cf.Q.total_degree());
  // Lowest degree with a definite nonzero coefficient; all below must be zero.
  auto order = [&](auto coeff, int from, int to) -> std::optional<int> {
    for (int k = from; k <= to; ++k) {
      bool any = false;
      for (int a = 0; a <= k; ++a) {
        for (Cplx v : coeff(a, k - a)) {
          Sign s = sign(v);
          if (s == Sign::unclear) return std::nullopt;
          any = any || s == Sign::nonzero;
        }
      }
      if (any) return k;
    }
    return to + 1;
  };
  auto pq = [&](int a, int b) { return std::array<Cplx, 2>{at(P, a, b), at(Q, a, b)}; };
  auto nu = order(pq, 0, maxdeg);
  if (!nu) {
    rec.classified = false;
    return;
  }
  if (*nu == 0) throw std::invalid_argument("not a singular point of the foliation");
  rec.nu = *nu;
  // Coefficient of u^a v^b in u Q - v P.
  auto cone = [&](int a, int b) { return std::array<Cplx, 1>{at(Q, a - 1, b) - at(P, a, b - 1)}; };
  auto contact = order(cone, *nu + 1, maxdeg + 1);
  if (!contact) {
    rec.classified = false;
    return;
  }
  if (*contact > *nu + 1) {
    rec.radial_order = *nu;
    if (*contact <= maxdeg + 1) rec.contact_order = *contact - 1;
  } else {
    rec.contact_order = *nu;
  }
  rec.special = *nu >= 2 || rec.radial_order.has_value();
}

Chart default_chart(const ProjPoint& s) {
  if (!s.at_infinity()) return Chart::z;
  if (s.is_exact()) return s.exact_coords()[1].is_zero() ? Chart::x : Chart::y;
  return std::abs(s.coords()[1]) > 1e-12 ? Chart::y : Chart::x;
}

}  // namespace

SingularityRecord classify_singularity(const Foliation& F, const ProjPoint& s, std::optional<Chart> chart) {
  const Chart ch = chart.value_or(default_chart(s));
  SingularityRecord rec;
  rec.location = s;
  ChartField cf = chart_field(F, ch);
  if (s.is_exact()) {
    auto c = chart_coords(s.exact_coords(), ch);
    if (!c) throw std::invalid_argument("point " + s.to_string() + " lies outside the chart " + to_string(ch));
    classify_exact(cf, *c, rec);
  } else {
    auto c = chart_coords(s.coords(), ch);
    if (!c) throw std::invalid_argument("point " + s.to_string() + " lies outside the chart " + to_string(ch));
    classify_floating(cf, *c, rec);
  }
  return rec;
}

SingularSet singular_points(const Foliation& F, std::uint64_t seed) {
  const auto& [A, B, C] = F.form();
  SingularSet set;
  auto record = [&](const ChartZero& z, ProjPoint loc, Chart ch) {
    SingularityRecord rec = classify_singularity(F, loc, ch);
    rec.milnor = z.multiplicity;
    set.points.push_back(rec);
    set.total_milnor += z.multiplicity;
  };
  auto small = [](Cplx v) { return std::abs(v) < 1e-8; };

  for (const auto& z : chart_zeros(A.dehomogenize("z"), B.dehomogenize("z"), seed)) {
    if (z.exact) {
      record(z, ProjPoint::affine((*z.exact)[0], (*z.exact)[1]), Chart::z);
    } else {
      record(z, ProjPoint::floating({z.approx[0], z.approx[1], 1.0}), Chart::z);
    }
  }
  // Points at infinity other than [1:0:0], in the chart y = 1 with coordinates (x, z).
  for (const auto& z : chart_zeros(A.dehomogenize("y"), C.dehomogenize("y"), seed + 1)) {
    if (z.exact) {
      if (!(*z.exact)[1].is_zero()) continue;
      record(z, ProjPoint::exact((*z.exact)[0], GaussRat(1), GaussRat(0)), Chart::y);
    } else {
      if (!small(z.approx[1])) continue;
      record(z, ProjPoint::floating({z.approx[0], 1.0, 0.0}), Chart::y);
    }
  }
  // [1:0:0] in the chart x = 1 with coordinates (y, z).
  for (const auto& z : chart_zeros(B.dehomogenize("x"), C.dehomogenize("x"), seed + 2)) {
    bool origin = z.exact ? ((*z.exact)[0].is_zero() && (*z.exact)[1].is_zero())
                          : (small(z.approx[0]) && small(z.approx[1]));
    if (!origin) continue;
    record(z, ProjPoint::exact(GaussRat(1), GaussRat(0), GaussRat(0)), Chart::x);
  }
  std::sort(set.points.begin(), set.points.end(),
            [](const SingularityRecord& a, const SingularityRecord& b) { return a.location < b.location; });
  const int d = F.degree();
  set.complete = set.total_milnor == d * d + d + 1;
  return set;
}

SpecialSingularities special_singularities(const SingularSet& set) {
  SpecialSingularities out;
  out.complete = set.complete;
  for (const auto& r : set.points) {
    if (!r.classified) {
      out.complete = false;
      continue;
    }
    if (r.special) {
      out.special.push_back(r);
      out.special_duals.push_back({r.location});
    }
    if (r.radial_order) {
      out.radial.push_back(r);
      out.radial_duals.push_back({r.location});
    }
  }
  return out;
}

SpecialSingularities special_singularities(const Foliation& F) { return special_singularities(singular_points(F)); }

}  // namespace webflat::fol
