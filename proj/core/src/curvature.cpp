#include "webflat/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace webflat::curv {

using poly::GaussRat;
using poly::MPoly;

namespace {

template <class T>
Cx<T> cx(double v) {
  return Cx<T>(num::Real<T>::from_double(v));
}

template <class T>
Cx<T> cx(Cplx z) {
  return Cx<T>::from(z);
}

template <class T>
double mag(const Cx<T>& z) {
  return num::magnitude(z);
}

// Value with first partials in p and q; enough to differentiate eta once.
template <class T>
struct Jet {
  Cx<T> v, p, q;

  friend Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.p + b.p, a.q + b.q}; }
  friend Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.p - b.p, a.q - b.q}; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v, a.p * b.v + a.v * b.p, a.q * b.v + a.v * b.q};
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Cx<T> inv = cx<T>(1.0) / b.v;
    Cx<T> r = a.v * inv;
    return {r, (a.p - r * b.p) * inv, (a.q - r * b.q) * inv};
  }
};

template <class T>
double value_mag(const Cx<T>& z) {
  return mag(z);
}
template <class T>
double value_mag(const Jet<T>& z) {
  return mag(z.v);
}

// The 2x2 system for eta of the triple (0, 1, 2), S being Cx<T> (values) or
// Jet<T> (values with derivatives). m, mp, mq: slope, m_p, m_q per member.
template <class S>
struct EtaSolve {
  S A, B;
  double residual = 0.0;
  bool singular = false;
};

template <class S>
EtaSolve<S> solve_eta(const S (&m)[3], const S (&mp)[3], const S (&mq)[3]) {
  // For (r, s, t) cyclic, delta = m_s - m_r and the equation
  //   A + B m_t = (delta_p + m_t delta_q) / delta + m_{t,q}.
  auto rhs = [&](int r, int s, int t) {
    S d = m[s] - m[r];
    S dp = mp[s] - mp[r];
    S dq = mq[s] - mq[r];
    return (dp + m[t] * dq) / d + mq[t];
  };
  EtaSolve<S> out;
  S diff = m[2] - m[0];
  if (value_mag(diff) == 0.0 || value_mag(m[1] - m[0]) == 0.0 || value_mag(m[2] - m[1]) == 0.0) {
    out.singular = true;
    return out;
  }
  S r1 = rhs(0, 1, 2);  // t = 2
  S r2 = rhs(1, 2, 0);  // t = 0
  S r3 = rhs(2, 0, 1);  // t = 1
  out.B = (r1 - r2) / diff;
  out.A = r1 - out.B * m[2];
  S third = out.A + out.B * m[1] - r3;
  double size = value_mag(out.A) + value_mag(out.B * m[1]) + value_mag(r3);
  out.residual = size > 0.0 ? value_mag(third) / size : value_mag(third);
  return out;
}

template <class T>
void triple_jets(const SlopeFanT<T>& fan, std::array<int, 3> t, Jet<T> (&m)[3], Jet<T> (&mp)[3],
                 Jet<T> (&mq)[3]) {
  for (int a = 0; a < 3; ++a) {
    const int i = t[a];
    const auto& d1 = fan.first_partials[i];
    const auto& d2 = fan.second_partials[i];
    m[a] = {fan.slopes[i], d1[0], d1[1]};
    mp[a] = {d1[0], d2[0], d2[1]};
    mq[a] = {d1[1], d2[1], d2[2]};
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  double hi = *mid;
  double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// DualWeb

DualWeb::DualWeb(const web::ImplicitWeb& W) : poly_(W.poly) {
  if (W.convention != web::Convention::dual) {
    throw std::invalid_argument("curvature is evaluated on dual webs (variables p, q, x)");
  }
  add_factor(W.poly);
}

DualWeb::DualWeb(const std::vector<MPoly>& factors) {
  if (factors.empty()) throw std::invalid_argument("the dual web has no factors");
  poly_ = MPoly::constant(factors.front().vars(), GaussRat(1));
  for (const auto& f : factors) {
    poly_ *= f;
    add_factor(f);
  }
}

void DualWeb::add_factor(const MPoly& f) {
  const int ix = f.var_index("x");
  const int ip = f.var_index("p");
  const int iq = f.var_index("q");
  const int n = f.degree_in(ix);
  if (n < 1) throw std::invalid_argument("a dual factor has no directions");
  Factor fac;
  fac.terms.assign(n + 1, {});
  for (const auto& t : f.terms()) {
    CTerm c;
    c.c53 = Cx<double>::from(t.coef);
    c.c106 = Cx<DoubleDouble>::from(t.coef);
    c.ep = t.mono.exponent(ip);
    c.eq = t.mono.exponent(iq);
    fac.max_p = std::max(fac.max_p, c.ep);
    fac.max_q = std::max(fac.max_q, c.eq);
    fac.terms[t.mono.exponent(ix)].push_back(c);
  }
  factors_.push_back(std::move(fac));
  degree_ += n;
}

template <class T>
CoeffJet<T> DualWeb::coefficient_jet(int factor, Cplx p, Cplx q) const {
  const Factor& f = factors_[factor];
  std::vector<Cx<T>> pp(f.max_p + 1, cx<T>(1.0)), qq(f.max_q + 1, cx<T>(1.0));
  const Cx<T> P = cx<T>(p), Q = cx<T>(q);
  for (int k = 1; k <= f.max_p; ++k) pp[k] = pp[k - 1] * P;
  for (int k = 1; k <= f.max_q; ++k) qq[k] = qq[k - 1] * Q;
  const std::size_t n = f.terms.size();
  CoeffJet<T> j;
  for (auto* v : {&j.c, &j.cp, &j.cq, &j.cpp, &j.cpq, &j.cqq}) v->assign(n, Cx<T>{});
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& t : f.terms[k]) {
      Cx<T> c;
      if constexpr (std::is_same_v<T, double>) {
        c = t.c53;
      } else {
        c = t.c106;
      }
      const int a = t.ep, b = t.eq;
      j.c[k] += c * pp[a] * qq[b];
      if (a >= 1) j.cp[k] += c * cx<T>(a) * pp[a - 1] * qq[b];
      if (b >= 1) j.cq[k] += c * cx<T>(b) * pp[a] * qq[b - 1];
      if (a >= 2) j.cpp[k] += c * cx<T>(a * (a - 1)) * pp[a - 2] * qq[b];
      if (a >= 1 && b >= 1) j.cpq[k] += c * cx<T>(a * b) * pp[a - 1] * qq[b - 1];
      if (b >= 2) j.cqq[k] += c * cx<T>(b * (b - 1)) * pp[a] * qq[b - 2];
    }
  }
  return j;
}

template <class T>
GPartials<T> DualWeb::partials(const CoeffJet<T>& jet, Cx<T> x) {
  // Horner for value, first and second derivative in x simultaneously.
  auto h3 = [&](const std::vector<Cx<T>>& c, Cx<T>& v, Cx<T>& d, Cx<T>& dd) {
    v = d = dd = Cx<T>{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      dd = dd * x + d;
      d = d * x + v;
      v = v * x + *it;
    }
    dd = dd * cx<T>(2.0);
  };
  GPartials<T> g;
  Cx<T> unused;
  h3(jet.c, g.g, g.gx, g.gxx);
  h3(jet.cp, g.gp, g.gxp, unused);
  h3(jet.cq, g.gq, g.gxq, unused);
  g.gpp = num::horner(jet.cpp, x);
  g.gpq = num::horner(jet.cpq, x);
  g.gqq = num::horner(jet.cqq, x);
  // Coefficient-norm scale, so that roots at or near 0 are not judged
  // against their own tiny value.
  double r = std::max(1.0, mag(x));
  double acc = 0.0;
  for (auto it = jet.c.rbegin(); it != jet.c.rend(); ++it) acc = acc * r + mag(*it);
  g.g_scale = acc;
  return g;
}

// ---------------------------------------------------------------------------
// Slopes

template <class T>
SlopeFanT<T> slopes_at(const DualWeb& W, const DualPoint& P, std::uint64_t seed) {
  struct Root {
    Cx<T> x;
    int factor;
  };
  std::vector<Root> roots;
  std::vector<CoeffJet<T>> jets;
  SlopeFanT<T> fan;
  fan.base = P;
  for (int f = 0; f < W.factor_count(); ++f) {
    jets.push_back(W.coefficient_jet<T>(f, P.p, P.q));
    const auto& c = jets.back().c;
    const int n = W.factor_degree(f);
    double big = 0.0;
    for (const auto& v : c) big = std::max(big, mag(v));
    if (big == 0.0 || mag(c[n]) <= 1e3 * num::Real<T>::unit_roundoff() * big) {
      throw SlopeError(SlopeError::Kind::resample, "degree drop: the leading x-coefficient vanishes");
    }
    std::vector<Cx<T>> xs;
    if (n == 1) {
      xs.push_back(-c[0] / c[1]);
    } else {
      xs = num::aberth_roots(c, seed + static_cast<std::uint64_t>(f));
      for (auto& r : xs) r = num::newton_polish(c, r, 2);
    }
    Cx<T> sum{};
    double sum_scale = 0.0;
    for (const auto& r : xs) {
      sum += r;
      sum_scale += mag(r);
      roots.push_back({r, f});
    }
    Cx<T> expect = -c[n - 1] / c[n];
    fan.root_sum_residual = std::max(fan.root_sum_residual, mag(sum - expect) / std::max(1.0, sum_scale));
  }

  const int n = static_cast<int>(roots.size());
  double xmax = 0.0;
  for (const auto& r : roots) xmax = std::max(xmax, mag(r.x));
  double sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) sep = std::min(sep, mag(roots[i].x - roots[j].x));
  }
  fan.separation = n > 1 ? sep / (1.0 + xmax) : std::numeric_limits<double>::infinity();
  if (fan.separation < cluster_tolerance<T>()) {
    throw SlopeError(SlopeError::Kind::near_discriminant, "near-discriminant: clustered slopes");
  }

  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
    // Ascending in the slope m = -x.
    double ar = num::Real<T>::to_double(a.x.re), br = num::Real<T>::to_double(b.x.re);
    if (ar != br) return ar > br;
    return num::Real<T>::to_double(a.x.im) > num::Real<T>::to_double(b.x.im);
  });

  const Cx<T> minus1 = cx<T>(-1.0), two = cx<T>(2.0);
  for (const auto& [x, f] : roots) {
    auto g = DualWeb::partials(jets[f], x);
    double res = g.g_scale > 0.0 ? mag(g.g) / g.g_scale : mag(g.g);
    if (res > kRootTol) throw SlopeError(SlopeError::Kind::resample, "root residual above tolerance");
    fan.residuals.push_back(res);
    if (mag(g.gx) == 0.0) throw SlopeError(SlopeError::Kind::near_discriminant, "near-discriminant: G_x vanishes");
    Cx<T> inv = minus1 / g.gx;
    Cx<T> xp = g.gp * inv;
    Cx<T> xq = g.gq * inv;
    Cx<T> xpp = (g.gpp + two * g.gxp * xp + g.gxx * xp * xp) * inv;
    Cx<T> xpq = (g.gpq + g.gxp * xq + g.gxq * xp + g.gxx * xp * xq) * inv;
    Cx<T> xqq = (g.gqq + two * g.gxq * xq + g.gxx * xq * xq) * inv;
    fan.slopes.push_back(-x);
    fan.first_partials.push_back({-xp, -xq});
    fan.second_partials.push_back({-xpp, -xpq, -xqq});
  }
  return fan;
}

// ---------------------------------------------------------------------------
// eta and curvature

template <class T>
EtaFormT<T> eta_for_triple(const SlopeFanT<T>& fan, std::array<int, 3> triple) {
  Cx<T> m[3], mp[3], mq[3];
  for (int a = 0; a < 3; ++a) {
    m[a] = fan.slopes[triple[a]];
    mp[a] = fan.first_partials[triple[a]][0];
    mq[a] = fan.first_partials[triple[a]][1];
  }
  auto s = solve_eta(m, mp, mq);
  if (s.singular) throw std::domain_error("cluster: coincident slopes in the triple");
  return {triple, s.A, s.B, s.residual};
}

template <class T>
FanCurvature curvature_of_fan(const SlopeFanT<T>& fan) {
  FanCurvature out;
  const int n = static_cast<int>(fan.slopes.size());
  Cx<T> total{};
  std::vector<double> summands;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Jet<T> m[3], mp[3], mq[3];
        triple_jets(fan, {i, j, k}, m, mp, mq);
        auto s = solve_eta(m, mp, mq);
        if (s.singular) throw std::domain_error("cluster: coincident slopes in a triple");
        Cx<T> K = s.B.p - s.A.q;
        total += K;
        out.per_triple.push_back(K.to_std());
        summands.push_back(mag(s.B.p) + mag(s.A.q));
        out.eta_residual = std::max(out.eta_residual, s.residual);
      }
    }
  }
  out.K = total.to_std();
  out.scale = median(summands);
  return out;
}

template <class T>
std::array<Cx<T>, 2> eta_sum(const SlopeFanT<T>& fan) {
  const int n = static_cast<int>(fan.slopes.size());
  Cx<T> A{}, B{};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        auto e = eta_for_triple(fan, {i, j, k});
        A += e.A;
        B += e.B;
      }
    }
  }
  return {A, B};
}

namespace {

template <class T>
CurvatureSample curvature_impl(const DualWeb& W, const DualPoint& P, const CurvatureOptions& opts) {
  CurvatureSample s;
  s.point = P;
  SlopeFanT<T> fan;
  try {
    fan = slopes_at<T>(W, P, opts.seed);
  } catch (const SlopeError& e) {
    s.note = e.what();
    return s;
  }
  s.separation = fan.separation;
  for (double r : fan.residuals) s.root_residual = std::max(s.root_residual, r);
  FanCurvature fc;
  try {
    fc = curvature_of_fan(fan);
  } catch (const std::domain_error& e) {
    s.note = e.what();
    return s;
  }
  s.K = fc.K;
  s.scale = fc.scale;
  s.eta_residual = fc.eta_residual;
  if (fc.eta_residual > 1e-9) {
    s.note = "eta consistency residual above tolerance";
    return s;
  }
  if (!opts.cross_validate || fan.slopes.size() < 3) {
    s.reliable = true;
    return s;
  }

  // Step size well inside the disc where every slope stays analytic.
  double rho = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(fan.slopes.size());
  auto grad = [&](int i) { return mag(fan.first_partials[i][0]) + mag(fan.first_partials[i][1]); };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double g = grad(i) + grad(j);
      if (g > 0.0) rho = std::min(rho, mag(fan.slopes[i] - fan.slopes[j]) / g);
    }
  }
  // Inside a cluster the roots carry more noise than the truncation error at
  // the smallest step, so larger steps are tried before giving up.
  const std::vector<double> ladder =
      std::is_same_v<T, double> ? std::vector<double>{1e-4, 1e-2} : std::vector<double>{1e-6, 1e-4, 1e-2};
  const double cap = 1e-3 * (1.0 + std::abs(P.p) + std::abs(P.q));

  auto eta_at = [&](Cplx p, Cplx q) { return eta_sum(slopes_at<T>(W, {p, q}, opts.seed)); };
  auto stencil = [&](double step) {
    // Use the step actually representable at P.
    Cplx pp = P.p + step, pm = P.p - step, qp = P.q + step, qm = P.q - step;
    Cx<T> Bp = eta_at(pp, P.q)[1], Bm = eta_at(pm, P.q)[1];
    Cx<T> Ap = eta_at(P.p, qp)[0], Am = eta_at(P.p, qm)[0];
    Cx<T> dB = (Bp - Bm) / cx<T>(pp - pm);
    Cx<T> dA = (Ap - Am) / cx<T>(qp - qm);
    return dB - dA;
  };
  std::string failure;
  for (double rel : ladder) {
    const double h = std::min(rel * rho, cap);
    try {
      Cx<T> d1 = stencil(h);
      Cx<T> d2 = stencil(0.5 * h);
      Cx<T> kfd = (cx<T>(4.0) * d2 - d1) / cx<T>(3.0);
      double diff = mag(kfd - cx<T>(s.K));
      double d = s.scale > 0.0 ? diff / s.scale : diff;
      if (s.fd_discrepancy < 0.0 || d < s.fd_discrepancy) s.fd_discrepancy = d;
    } catch (const std::exception& e) {
      failure = std::string("stencil failed: ") + e.what();
    }
    if (s.fd_discrepancy >= 0.0 && s.fd_discrepancy <= opts.agreement) break;
    if (h == cap) break;
  }
  if (s.fd_discrepancy < 0.0) {
    s.note = failure;
    return s;
  }
  s.reliable = s.fd_discrepancy <= opts.agreement;
  if (!s.reliable) s.note = "analytic and finite-difference curvature disagree";
  return s;
}

}  // namespace

CurvatureSample curvature_at(const DualWeb& W, const DualPoint& P, const CurvatureOptions& opts) {
  if (opts.precision_bits <= 53) return curvature_impl<double>(W, P, opts);
  return curvature_impl<DoubleDouble>(W, P, opts);
}

std::string to_string(FlatStatus s) {
  switch (s) {
    case FlatStatus::flat_consistent:
      return "flat-consistent";
    case FlatStatus::non_flat:
      return "non-flat";
    case FlatStatus::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

// ---------------------------------------------------------------------------
// Flatness

namespace {

constexpr double kBoundedGrowth = 3.0;
// A simple pole multiplies |K| by 10 per decade; allow 5% on the log slope.
const double kPoleRatio = std::pow(10.0, 0.95);

Probe run_probe(const DualWeb& D, const std::string& name, DualPoint base, Cplx dir[2],
                const FlatnessConfig& cfg, const CurvatureOptions& opts) {
  Probe pr;
  pr.component = name;
  pr.base = base;
  pr.direction = dir[0];
  std::vector<double> mags;
  std::vector<double> rels;
  for (int k = 0; k < cfg.probe_decades; ++k) {
    double t = std::pow(10.0, -2 - k);
    pr.distances.push_back(t);
    auto s = curvature_at(D, {base.p + t * dir[0], base.q + t * dir[1]}, opts);
    if (s.reliable) {
      mags.push_back(std::abs(s.K));
      rels.push_back(s.relative());
    }
    pr.samples.push_back(std::move(s));
  }
  pr.resolved = mags.size() >= 2;
  if (!pr.resolved) return pr;
  double log_sum = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < mags.size(); ++k) {
    double r = mags[k - 1] > 0.0 ? mags[k] / mags[k - 1] : (mags[k] > 0.0 ? 1e300 : 1.0);
    min_ratio = std::min(min_ratio, r);
    log_sum += std::log10(std::max(r, 1e-300));
  }
  pr.growth_per_decade = std::pow(10.0, log_sum / static_cast<double>(mags.size() - 1));
  bool zero = std::all_of(rels.begin(), rels.end(), [&](double r) { return r <= cfg.flat_tol; });
  double lo = *std::min_element(mags.begin(), mags.end());
  double hi = *std::max_element(mags.begin(), mags.end());
  pr.bounded = zero || hi <= kBoundedGrowth * lo;
  pr.pole = min_ratio >= kPoleRatio && rels.back() > cfg.nonflat_floor;
  return pr;
}

// The same web in a random exact projective frame. Flatness does not depend
// on the frame, while special points (such as points at infinity whose dual
// lines carry infinite slopes) become generic.
web::WebSpec generic_frame(const web::WebSpec& W, std::uint64_t seed) {
  for (std::uint64_t k = 0; k < 16; ++k) {
    const auto T = geo::Mat3::random(seed + 0x9e3779b9 * (k + 1));
    web::WebSpec V;
    bool ok = true;
    for (const auto& l : W.lines) {
      auto m = T.map_line(l);
      ok = ok && !m.is_infinity();
      V.lines.push_back(m);
    }
    if (!ok) continue;
    for (const auto& F : W.foliations) V.foliations.push_back(F.transformed(T));
    return V;
  }
  throw std::runtime_error("no projective frame keeps the lines finite");
}

}  // namespace

FlatnessVerdict flatness_test(const web::WebSpec& W, const FlatnessConfig& cfg) {
  if (cfg.samples <= 0 || cfg.flat_tol <= 0.0 || cfg.nonflat_floor <= 0.0 || cfg.probe_decades < 0) {
    throw std::invalid_argument("flatness configuration values must be positive");
  }
  W.validate();
  const web::WebSpec V = cfg.random_frame ? generic_frame(W, cfg.seed) : W;
  FlatnessVerdict v;
  v.flat_tol = cfg.flat_tol;
  v.nonflat_floor = cfg.nonflat_floor;
  v.seed = cfg.seed;
  v.precision_bits = cfg.precision_bits <= 53 ? 53 : 106;

  const DualWeb D = DualWeb::of(V);
  CurvatureOptions opts;
  opts.precision_bits = cfg.precision_bits;
  opts.cross_validate = cfg.cross_validate;
  opts.seed = cfg.seed ^ 0x51093;

  if (D.degree() < 3) {
    v.status = FlatStatus::flat_consistent;
    v.reason = "fewer than three directions: the curvature vanishes identically";
    return v;
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int attempt = 0; static_cast<int>(v.samples.size()) < cfg.samples && attempt < 20 * cfg.samples; ++attempt) {
    DualPoint P{{u(rng), u(rng)}, {u(rng), u(rng)}};
    auto s = curvature_at(D, P, opts);
    // Slope failures and crowded slopes mean the candidate sits too close to
    // the discriminant (or the degree drops): draw another.
    if (s.separation < 1e-3) {
      ++v.rejected;
      continue;
    }
    v.samples.push_back(std::move(s));
  }

  if (cfg.probe_decades > 0) {
    const auto report = web::discriminant_structural(V);
    for (std::size_t c = 0; c < report.components.size(); ++c) {
      const auto& comp = report.components[c];
      auto pts = web::component_points(report, comp, 1, cfg.seed + 7919 * (c + 1));
      if (pts.empty()) continue;
      Cplx dir[2];
      if (comp.kind == web::ComponentKind::dual_line) {
        const auto& s = comp.line->point.coords();
        dir[0] = std::conj(s[0]);
        dir[1] = std::conj(s[2]);
      } else {
        dir[0] = {u(rng), u(rng)};
        dir[1] = {u(rng), u(rng)};
      }
      double norm = std::sqrt(std::norm(dir[0]) + std::norm(dir[1]));
      dir[0] /= norm;
      dir[1] /= norm;
      v.probes.push_back(run_probe(D, comp.to_string(), {pts[0].first, pts[0].second}, dir, cfg, opts));
    }
  }

  int reliable = 0;
  bool all_small = true;
  for (std::size_t i = 0; i < v.samples.size(); ++i) {
    const auto& s = v.samples[i];
    if (!s.reliable) continue;
    ++reliable;
    double r = s.relative();
    if (r > cfg.nonflat_floor && !v.witness) v.witness = i;
    if (r > cfg.flat_tol) all_small = false;
  }
  const bool any_pole = std::any_of(v.probes.begin(), v.probes.end(), [](const Probe& p) { return p.pole; });
  const bool probes_ok = std::all_of(v.probes.begin(), v.probes.end(),
                                     [](const Probe& p) { return p.resolved && p.bounded; });
  if (v.witness || any_pole) {
    v.status = FlatStatus::non_flat;
    v.reason = v.witness ? "a reliable sample exceeds the non-flat floor" : "curvature has a pole along a component";
    if (v.witness && any_pole) v.reason += "; a probe shows a pole signature";
  } else if (reliable < (9 * cfg.samples + 9) / 10) {
    v.status = FlatStatus::inconclusive;
    v.reason = "insufficient reliable samples (" + std::to_string(reliable) + " of " + std::to_string(cfg.samples) + ")";
  } else if (all_small && probes_ok) {
    v.status = FlatStatus::flat_consistent;
    v.reason = "all samples below the flat tolerance; probes bounded";
  } else {
    v.status = FlatStatus::inconclusive;
    v.reason = all_small ? "some probe is unresolved or unbounded" : "samples between the flat tolerance and the non-flat floor";
  }
  return v;
}

// ---------------------------------------------------------------------------
// Identities

namespace {

void require_homogeneous(const web::WebSpec& W) {
  for (const auto& F : W.foliations) {
    if (!F.is_homogeneous()) {
      throw std::invalid_argument("homothety check needs homogeneous foliations; " + F.label() + " is not");
    }
  }
  for (const auto& l : W.lines) {
    if (std::abs(l.coeffs()[2]) != 0.0) {
      throw std::invalid_argument("homothety check needs lines through the origin; got " + l.to_string());
    }
  }
}

template <class T>
FanCurvature shifted_curvature(const DualWeb& D, const DualPoint& P, double shift, std::uint64_t seed) {
  auto fan = slopes_at<T>(D, P, seed);
  fan.slopes[0] += cx<T>(shift);
  return curvature_of_fan(fan);
}

}  // namespace

HomothetyCheck homothety_scaling_check(const web::WebSpec& W, Cplx a, Cplx b, Cplx lambda,
                                       const CurvatureOptions& opts) {
  require_homogeneous(W);
  if (lambda == 0.0) throw std::invalid_argument("homothety factor must be nonzero");
  const DualWeb D = DualWeb::of(W);
  auto kappa = [&](Cplx aa, Cplx bb, double& scale) {
    if (std::abs(bb) < 1e-12) throw std::domain_error("resample: the point lies on an excluded line b = 0");
    auto s = curvature_at(D, {-aa / bb, 1.0 / bb}, opts);
    if (!s.note.empty()) throw std::domain_error("resample: " + s.note);
    double jac = std::pow(std::abs(bb), 3);
    scale = s.scale / jac;
    return s.K / (bb * bb * bb);
  };
  HomothetyCheck out;
  double s1 = 0.0, s2 = 0.0;
  out.kappa = kappa(a, b, s1);
  out.kappa_scaled = kappa(a / lambda, b / lambda, s2);
  double denom = std::norm(lambda) * s1 + s2;
  double diff = std::abs(lambda * lambda * out.kappa - out.kappa_scaled);
  out.relative_error = denom > 0.0 ? diff / denom : diff;
  return out;
}

ExpansionCheck curvature_expansion_check(const std::vector<web::WebSpec>& parts, const DualPoint& P,
                                         double perturb, const CurvatureOptions& opts) {
  if (parts.size() < 2) throw std::invalid_argument("expansion check needs lines and a remaining web");
  const std::size_t k = parts.size() - 1;
  std::vector<web::WebSpec> lines(parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(k));
  for (const auto& l : lines) {
    if (l.lines.size() != 1 || !l.foliations.empty()) {
      throw std::invalid_argument("expansion check: all parts but the last must be single lines");
    }
  }
  const web::WebSpec& rest = parts.back();
  double lhs_scale = 0.0;
  auto K = [&](const web::WebSpec& V, double shift, double* scale) -> Cplx {
    V.validate();
    if (V.dual_degree() < 3) return 0.0;
    const DualWeb D = DualWeb::of(V);
    auto fc = opts.precision_bits <= 53 ? shifted_curvature<double>(D, P, shift, opts.seed)
                                        : shifted_curvature<DoubleDouble>(D, P, shift, opts.seed);
    if (scale != nullptr) *scale = fc.scale;
    return fc.K;
  };

  web::WebSpec all = rest;
  web::WebSpec pencil;
  for (const auto& l : lines) {
    all.lines.push_back(l.lines[0]);
    pencil.lines.push_back(l.lines[0]);
  }
  ExpansionCheck out;
  out.lhs = K(all, perturb, &lhs_scale);
  Cplx rhs = K(pencil, 0.0, nullptr);
  Cplx single = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    web::WebSpec wi = rest;
    wi.lines.push_back(lines[i].lines[0]);
    single += K(wi, 0.0, nullptr);
    for (std::size_t j = i + 1; j < k; ++j) {
      web::WebSpec wij = wi;
      wij.lines.push_back(lines[j].lines[0]);
      pairs += K(wij, 0.0, nullptr);
    }
  }
  const double kk = static_cast<double>(k);
  rhs += -(kk - 2.0) * single + pairs + ((kk - 1.0) * (kk - 2.0) / 2.0) * K(rest, 0.0, nullptr);
  out.rhs = rhs;
  double diff = std::abs(out.lhs - out.rhs);
  out.residual = lhs_scale > 0.0 ? diff / lhs_scale : diff;
  return out;
}

// ---------------------------------------------------------------------------
// Instantiations

template CoeffJet<double> DualWeb::coefficient_jet<double>(int, Cplx, Cplx) const;
template CoeffJet<DoubleDouble> DualWeb::coefficient_jet<DoubleDouble>(int, Cplx, Cplx) const;
template GPartials<double> DualWeb::partials<double>(const CoeffJet<double>&, Cx<double>);
template GPartials<DoubleDouble> DualWeb::partials<DoubleDouble>(const CoeffJet<DoubleDouble>&, Cx<DoubleDouble>);
template SlopeFanT<double> slopes_at<double>(const DualWeb&, const DualPoint&, std::uint64_t);
template SlopeFanT<DoubleDouble> slopes_at<DoubleDouble>(const DualWeb&, const DualPoint&, std::uint64_t);
template EtaFormT<double> eta_for_triple<double>(const SlopeFanT<double>&, std::array<int, 3>);
template EtaFormT<DoubleDouble> eta_for_triple<DoubleDouble>(const SlopeFanT<DoubleDouble>&, std::array<int, 3>);
template FanCurvature curvature_of_fan<double>(const SlopeFanT<double>&);
template FanCurvature curvature_of_fan<DoubleDouble>(const SlopeFanT<DoubleDouble>&);
template std::array<Cx<double>, 2> eta_sum<double>(const SlopeFanT<double>&);
template std::array<Cx<DoubleDouble>, 2> eta_sum<DoubleDouble>(const SlopeFanT<DoubleDouble>&);

}  // namespace webflat::curv
