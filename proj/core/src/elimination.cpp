#include "webflat/elimination.hpp"

#include <algorithm>
#include <random>
#include <utility>

#include "webflat/upoly.hpp"

namespace webflat::poly {

namespace {

using Coeffs = std::vector<MPoly>;

int deg(const Coeffs& c) {
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    if (!c[k].is_zero()) return k;
  }
  return -1;
}

void trim(Coeffs& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Coeffs prem(Coeffs a, const Coeffs& b) {
  const int n = deg(b);
  const MPoly& lb = b[n];
  int e = deg(a) - n + 1;
  if (e <= 0) return a;
  while (deg(a) >= n) {
    const int da = deg(a);
    const MPoly la = a[da];
    for (auto& c : a) {
      if (!c.is_zero()) c = c * lb;
    }
    for (int k = 0; k <= n; ++k) {
      if (!b[k].is_zero()) a[k + da - n] -= la * b[k];
    }
    trim(a);
    --e;
  }
  if (e > 0) {
    MPoly f = lb.pow(static_cast<unsigned>(e));
    for (auto& c : a) c = c * f;
  }
  return a;
}

MPoly content_of(const Coeffs& c) {
  std::vector<const MPoly*> nz;
  for (const auto& x : c) {
    if (x.is_zero()) continue;
    if (x.is_constant()) return MPoly::constant(x.vars(), GaussRat(1));
    nz.push_back(&x);
  }
  if (nz.empty()) return MPoly();
  // Small coefficients first: the running gcd shrinks fastest that way.
  std::sort(nz.begin(), nz.end(), [](const MPoly* a, const MPoly* b) { return a->size() < b->size(); });
  MPoly g = nz.front()->monic();
  for (std::size_t k = 1; k < nz.size() && !g.is_constant(); ++k) g = gcd(g, *nz[k]);
  return g;
}

Coeffs primitive(const Coeffs& c) {
  MPoly g = content_of(c);
  Coeffs out;
  out.reserve(c.size());
  for (const auto& x : c) out.push_back(x.is_zero() ? x : exact_divide(x, g));
  return out;
}

int odd(int k) { return k & 1; }

}  // namespace

MPoly pseudo_remainder(const MPoly& a, const MPoly& b, int var) {
  if (b.is_zero()) throw std::domain_error("pseudo-remainder by zero");
  VarList u = merge_vars(a.vars(), b.vars());
  Coeffs r = prem(a.with_vars(u).coefficients_in(var), b.with_vars(u).coefficients_in(var));
  return MPoly::from_coefficients(u, var, r);
}

MPoly resultant(const MPoly& f, const MPoly& g, std::string_view var) {
  VarList u = merge_vars(f.vars(), g.vars());
  MPoly ff = f.with_vars(u);
  MPoly gg = g.with_vars(u);
  if (!ff.has_var(var) || (ff.degree_in(var) <= 0 && gg.degree_in(var) <= 0)) {
    throw std::invalid_argument("resultant: variable '" + std::string(var) + "' occurs in neither input");
  }
  if (ff.is_zero() || gg.is_zero()) return MPoly(u);
  const int v = ff.var_index(var);
  Coeffs a = ff.coefficients_in(v);
  Coeffs b = gg.coefficients_in(v);
  int sign = 1;
  if (deg(a) < deg(b)) {
    std::swap(a, b);
    if (odd(deg(a)) && odd(deg(b))) sign = -sign;
  }
  if (deg(b) == 0) {
    MPoly r = b[0].pow(static_cast<unsigned>(deg(a)));
    return sign > 0 ? r : -r;
  }
  MPoly g1 = MPoly::constant(u, GaussRat(1));
  MPoly h = g1;
  for (;;) {
    const int da = deg(a);
    const int db = deg(b);
    const int delta = da - db;
    if (odd(da) && odd(db)) sign = -sign;
    Coeffs r = prem(a, b);
    a = std::move(b);
    const int dr = deg(r);
    if (dr < 0) return MPoly(u);
    MPoly divisor = g1 * h.pow(static_cast<unsigned>(delta));
    for (auto& c : r) {
      if (!c.is_zero()) c = exact_divide(c, divisor);
    }
    b = std::move(r);
    g1 = a[deg(a)];
    if (delta > 0) h = exact_divide(g1.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    if (dr == 0) {
      const int dA = deg(a);
      MPoly res = exact_divide(b[0].pow(static_cast<unsigned>(dA)), h.pow(static_cast<unsigned>(dA - 1)));
      return sign > 0 ? res : -res;
    }
  }
}

MPoly discriminant_in(const MPoly& f, std::string_view var) {
  if (!f.has_var(var) || f.degree_in(var) < 1) {
    throw std::invalid_argument("discriminant: polynomial is constant in '" + std::string(var) + "'");
  }
  const int v = f.var_index(var);
  const int n = f.degree_in(v);
  MPoly lc = f.coefficients_in(v).back();
  MPoly r = exact_divide(resultant(f, f.derivative(v), var), lc);
  return (n * (n - 1) / 2) % 2 == 0 ? r : -r;
}

MPoly content_in(const MPoly& f, int var) {
  if (f.is_zero()) return f;
  return content_of(f.coefficients_in(var));
}

MPoly primitive_part_in(const MPoly& f, int var) {
  if (f.is_zero()) return f;
  return exact_divide(f, content_in(f, var));
}

namespace {

// Degree of the gcd of univariate images at a random integer point, or -1
// when a leading coefficient vanishes there (image unusable).
int image_gcd_degree(const Coeffs& a, const Coeffs& b, int var, std::mt19937_64& rng) {
  const VarList& vars = a.front().vars();
  std::uniform_int_distribution<int> dist(-97, 97);
  std::vector<GaussRat> pt(vars.size());
  for (auto& x : pt) x = GaussRat(dist(rng));
  pt[var] = GaussRat(0);
  auto image = [&](const Coeffs& c) {
    std::vector<GaussRat> v;
    v.reserve(c.size());
    for (const auto& x : c) v.push_back(x.is_zero() ? GaussRat(0) : x.eval(pt));
    return UPoly(std::move(v));
  };
  UPoly ua = image(a);
  UPoly ub = image(b);
  if (ua.degree() != deg(a) || ub.degree() != deg(b)) return -1;
  return UPoly::gcd(ua, ub).degree();
}

// Gcd of two primitive polynomials (as coefficient lists in `var`) by the
// subresultant PRS, returned primitive.
Coeffs primitive_gcd(Coeffs a, Coeffs b, const VarList& u) {
  if (deg(a) < deg(b)) std::swap(a, b);
  MPoly g1 = MPoly::constant(u, GaussRat(1));
  MPoly h = g1;
  for (;;) {
    const int delta = deg(a) - deg(b);
    Coeffs r = prem(a, b);
    const int dr = deg(r);
    if (dr < 0) return primitive(b);
    if (dr == 0) return {MPoly::constant(u, GaussRat(1))};
    MPoly divisor = g1 * h.pow(static_cast<unsigned>(delta));
    for (auto& c : r) {
      if (!c.is_zero()) c = exact_divide(c, divisor);
    }
    a = std::move(b);
    b = std::move(r);
    g1 = a[deg(a)];
    if (delta > 0) h = exact_divide(g1.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
  }
}

}  // namespace

MPoly gcd(const MPoly& f0, const MPoly& g0) {
  VarList u = merge_vars(f0.vars(), g0.vars());
  MPoly f = f0.with_vars(u);
  MPoly g = g0.with_vars(u);
  if (f.is_zero()) return g.monic();
  if (g.is_zero()) return f.monic();
  if (f.is_constant() || g.is_constant()) return MPoly::constant(u, GaussRat(1));
  // A variable occurring in only one input lets us pass to contents.
  for (int k = 0; k < f.nvars(); ++k) {
    const int df = f.degree_in(k);
    const int dg = g.degree_in(k);
    if (df > 0 && dg == 0) return gcd(content_in(f, k), g);
    if (dg > 0 && df == 0) return gcd(f, content_in(g, k));
  }
  // Main variable: the shared one of least degree keeps the PRS short.
  int v = -1;
  for (int k = 0; k < f.nvars(); ++k) {
    if (f.degree_in(k) <= 0) continue;
    if (v < 0 || std::min(f.degree_in(k), g.degree_in(k)) < std::min(f.degree_in(v), g.degree_in(v))) v = k;
  }

  Coeffs a = f.coefficients_in(v);
  Coeffs b = g.coefficients_in(v);
  MPoly c = gcd(content_of(a), content_of(b));
  a = primitive(a);
  b = primitive(b);

  std::mt19937_64 rng(f.hash() ^ (g.hash() << 1));
  int dimg = -1;
  for (int tries = 0; tries < 3 && dimg < 0; ++tries) dimg = image_gcd_degree(a, b, v, rng);
  Coeffs h;
  if (dimg == 0) {
    h = {MPoly::constant(u, GaussRat(1))};
  } else {
    // If the image gcd has the degree of one input, that input may divide the other.
    const Coeffs& small = deg(a) <= deg(b) ? a : b;
    const Coeffs& large = deg(a) <= deg(b) ? b : a;
    if (dimg == deg(small)) {
      MPoly ps = MPoly::from_coefficients(u, v, small);
      if (try_divide(MPoly::from_coefficients(u, v, large), ps)) return (c * ps).monic();
    }
    h = primitive_gcd(a, b, u);
  }
  return (c * MPoly::from_coefficients(u, v, h)).monic();
}

MPoly squarefree(const MPoly& f) {
  if (f.is_zero() || f.is_constant()) return f;
  MPoly g = f;
  for (int v = 0; v < f.nvars() && !g.is_constant(); ++v) {
    if (f.degree_in(v) > 0) g = gcd(g, f.derivative(v));
  }
  return exact_divide(f, g);
}

MPoly squarefree_in(const MPoly& f, std::string_view var) {
  if (f.is_zero() || !f.has_var(var) || f.degree_in(var) < 1) return f;
  return exact_divide(f, gcd(f, f.derivative(var)));
}

}  // namespace webflat::poly
