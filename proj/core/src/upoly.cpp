#include "webflat/upoly.hpp"

#include <algorithm>
#include <cmath>

#include "webflat/numeric.hpp"

namespace webflat::poly {

UPoly::UPoly(std::vector<GaussRat> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

UPoly UPoly::x_minus(const GaussRat& r) { return UPoly({-r, GaussRat(1)}); }

UPoly UPoly::from_mpoly(const MPoly& f, int var) {
  std::vector<GaussRat> c(std::max(0, f.degree_in(var) + 1));
  for (const auto& t : f.terms()) {
    if (t.mono.degree() != t.mono.exponent(var)) {
      throw std::invalid_argument("polynomial is not univariate in '" + f.vars()[var] + "'");
    }
    c[t.mono.exponent(var)] = t.coef;
  }
  return UPoly(std::move(c));
}

MPoly UPoly::to_mpoly(const VarList& vars, int var) const {
  std::vector<Term> terms;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k].is_zero()) continue;
    Monomial m;
    m.set_exponent(var, static_cast<int>(k));
    terms.push_back({m, c_[k]});
  }
  return MPoly(vars, std::move(terms));
}

GaussRat UPoly::eval(const GaussRat& x) const {
  GaussRat acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<GaussRat> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * GaussRat(static_cast<long>(k));
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (is_zero() || lc().is_one()) return *this;
  GaussRat inv = lc().inverse();
  UPoly out = *this;
  for (auto& c : out.c_) c *= inv;
  return out;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<GaussRat> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<GaussRat> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] -= b.c_[k];
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<GaussRat> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return UPoly(std::move(c));
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (a.degree() < b.degree()) return {UPoly(), a};
  std::vector<GaussRat> r = a.c_;
  std::vector<GaussRat> q(a.c_.size() - b.c_.size() + 1);
  const GaussRat inv = b.lc().inverse();
  const int db = b.degree();
  for (int k = a.degree(); k >= db; --k) {
    if (r[k].is_zero()) continue;
    GaussRat f = r[k] * inv;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= f * b.c_[j];
    q[k - db] = std::move(f);
  }
  r.resize(db);
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly UPoly::gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a;
  UPoly y = b;
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).second;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

std::vector<std::complex<double>> UPoly::to_complex() const {
  std::vector<std::complex<double>> out;
  out.reserve(c_.size());
  for (const auto& c : c_) out.push_back(c.to_complex());
  return out;
}

std::vector<std::pair<UPoly, int>> squarefree_decomposition(const UPoly& f) {
  std::vector<std::pair<UPoly, int>> out;
  if (f.degree() < 1) return out;
  UPoly fp = f.derivative();
  UPoly a = UPoly::gcd(f, fp);
  UPoly b = UPoly::divmod(f, a).first;
  UPoly c = UPoly::divmod(fp, a).first;
  UPoly d = c - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    a = UPoly::gcd(b, d);
    if (a.degree() > 0) out.emplace_back(a.monic(), i);
    b = UPoly::divmod(b, a).first;
    c = UPoly::divmod(d, a).first;
    d = c - b.derivative();
  }
  return out;
}

namespace {

// Multiplies by the lcm of all denominators, giving coefficients in Z[i].
std::vector<GaussRat> integralize(const UPoly& p) {
  mpz_class l = 1;
  for (const auto& c : p.coeffs()) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.re().get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.im().get_den_mpz_t());
  }
  std::vector<GaussRat> out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.push_back(c * GaussRat(Rat(l)));
  return out;
}

// A Gaussian-rational root r of an integral polynomial with leading
// coefficient L satisfies L*r in Z[i] (L r is integral over Z[i], which is
// integrally closed), so rounding L*z recovers it from a good approximation.
std::optional<GaussRat> recognize(const UPoly& s, const GaussRat& lead_int, std::complex<double> z) {
  // A candidate must also be close to z: another root of s may round from it.
  auto near = [&](const GaussRat& c) { return std::abs(c.to_complex() - z) <= 1e-7 * std::max(1.0, std::abs(z)); };
  std::complex<double> L = lead_int.to_complex();
  std::complex<double> w = L * z;
  if (std::abs(w.real()) < 1e13 && std::abs(w.imag()) < 1e13) {
    GaussRat cand = round_to_denominator(w, 1) / lead_int;
    if (near(cand) && s.eval(cand).is_zero()) return cand;
  }
  for (long den = 1; den <= 16; ++den) {
    if (std::abs(z.real() * den) > 1e13 || std::abs(z.imag() * den) > 1e13) break;
    GaussRat cand = round_to_denominator(z, den);
    if (near(cand) && s.eval(cand).is_zero()) return cand;
  }
  return std::nullopt;
}

std::vector<std::complex<double>> numeric_roots(const UPoly& s, std::uint64_t seed) {
  using DD = num::DoubleDouble;
  std::vector<num::Cx<double>> cd;
  std::vector<num::Cx<DD>> cdd;
  for (const auto& c : s.coeffs()) {
    cd.push_back(num::Cx<double>::from(c));
    cdd.push_back(num::Cx<DD>::from(c));
  }
  auto approx = num::aberth_roots(cd, seed);
  std::vector<std::complex<double>> out;
  out.reserve(approx.size());
  for (const auto& z : approx) {
    num::Cx<DD> zz = num::Cx<DD>::from(z.to_std());
    zz = num::newton_polish(cdd, zz, 4);
    out.push_back(zz.to_std());
  }
  return out;
}

}  // namespace

std::vector<URoot> roots_with_multiplicity(const UPoly& f, std::uint64_t seed) {
  std::vector<URoot> out;
  if (f.degree() < 1) return out;
  // Denominators of rational roots divide the leading coefficient of the
  // integral form of f itself, whatever squarefree factor they sit in.
  const GaussRat lead = integralize(f).back();
  for (const auto& [s, mult] : squarefree_decomposition(f)) {
    if (s.degree() == 1) {
      GaussRat r = -s.coeffs()[0] / s.coeffs()[1];
      out.push_back({r.to_complex(), r, mult});
      continue;
    }
    for (const auto& z : numeric_roots(s, seed + static_cast<std::uint64_t>(mult))) {
      if (auto r = recognize(s, lead, z)) {
        // Guard against recording the same exact root twice.
        bool dup = std::any_of(out.begin(), out.end(), [&](const URoot& u) {
          return u.exact && *u.exact == *r && u.multiplicity == mult;
        });
        if (dup) {
          out.push_back({z, std::nullopt, mult});
        } else {
          out.push_back({r->to_complex(), r, mult});
        }
      } else {
        out.push_back({z, std::nullopt, mult});
      }
    }
  }
  return out;
}

std::vector<std::pair<GaussRat, int>> exact_roots(const UPoly& f, std::uint64_t seed) {
  std::vector<std::pair<GaussRat, int>> out;
  for (const auto& r : roots_with_multiplicity(f, seed)) {
    if (r.exact) out.emplace_back(*r.exact, r.multiplicity);
  }
  return out;
}

}  // namespace webflat::poly
