#include "webflat/mpoly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "webflat/numeric.hpp"

namespace webflat::poly {

namespace {

struct KeyHash {
  std::size_t operator()(Monomial::Key k) const {
    auto lo = static_cast<std::uint64_t>(k);
    auto hi = static_cast<std::uint64_t>(k >> 64);
    return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9E3779B97F4A7C15ull));
  }
};

bool term_desc(const Term& a, const Term& b) { return b.mono < a.mono; }

// Remaps monomials from one variable list into another; map[i] is the target
// index of source variable i.
Monomial remap(const Monomial& m, const std::vector<int>& map) {
  int exps[kMaxVars] = {};
  for (std::size_t i = 0; i < map.size(); ++i) {
    int e = m.exponent(static_cast<int>(i));
    if (e != 0) exps[map[i]] = e;
  }
  return Monomial::from_exponents(exps);
}

}  // namespace

// ---------------------------------------------------------------- Monomial

Monomial Monomial::from_exponents(std::span<const int> exps) {
  if (exps.size() > static_cast<std::size_t>(kMaxVars)) {
    throw std::invalid_argument("too many variables in monomial");
  }
  Monomial m;
  for (std::size_t i = 0; i < exps.size(); ++i) m.set_exponent(static_cast<int>(i), exps[i]);
  return m;
}

Monomial Monomial::from_key(Key k) {
  Monomial m;
  m.key_ = k;
  for (int v = 0; v < kMaxVars; ++v) m.degree_ += m.exponent(v);
  return m;
}

void Monomial::set_exponent(int var, int e) {
  if (e < 0 || e > 0xFFFF) throw std::overflow_error("monomial exponent out of range");
  degree_ += e - exponent(var);
  key_ &= ~(static_cast<Key>(0xFFFFu) << shift(var));
  key_ |= static_cast<Key>(e) << shift(var);
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  for (int v = 0; v < kMaxVars; ++v) {
    if (exponent(v) > other.exponent(v)) return false;
  }
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  for (int v = 0; v < kMaxVars; ++v) {
    if (a.exponent(v) + b.exponent(v) > 0xFFFF) throw std::overflow_error("monomial exponent overflow");
  }
  Monomial m;
  m.key_ = a.key_ + b.key_;
  m.degree_ = a.degree_ + b.degree_;
  return m;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.key_ = a.key_ - b.key_;
  m.degree_ = a.degree_ - b.degree_;
  return m;
}

// ---------------------------------------------------------------- MPoly basics

std::shared_ptr<const VarList> MPoly::empty_vars() {
  static const auto empty = std::make_shared<const VarList>();
  return empty;
}

MPoly::MPoly(VarList vars) {
  if (vars.size() > static_cast<std::size_t>(kMaxVars)) {
    throw std::invalid_argument("at most 8 variables are supported");
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (vars[i] == vars[j]) throw std::invalid_argument("duplicate variable '" + vars[i] + "'");
    }
  }
  vars_ = std::make_shared<const VarList>(std::move(vars));
}

MPoly::MPoly(VarList vars, std::vector<Term> terms) : MPoly(std::move(vars)) {
  terms_ = std::move(terms);
  normalize_terms();
}

void MPoly::normalize_terms() {
  std::sort(terms_.begin(), terms_.end(), term_desc);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
  terms_ = std::move(out);
}

MPoly MPoly::constant(VarList vars, GaussRat c) {
  MPoly p(std::move(vars));
  if (!c.is_zero()) p.terms_.push_back({Monomial(), std::move(c)});
  return p;
}

MPoly MPoly::variable(VarList vars, std::string_view name) {
  MPoly p(std::move(vars));
  Monomial m;
  m.set_exponent(p.var_index(name), 1);
  p.terms_.push_back({m, GaussRat(1)});
  return p;
}

int MPoly::var_index(std::string_view name) const {
  for (std::size_t i = 0; i < vars_->size(); ++i) {
    if ((*vars_)[i] == name) return static_cast<int>(i);
  }
  throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
}

bool MPoly::has_var(std::string_view name) const {
  return std::find(vars_->begin(), vars_->end(), name) != vars_->end();
}

GaussRat MPoly::constant_value() const {
  if (!is_constant()) throw std::logic_error("polynomial is not constant");
  return terms_.empty() ? GaussRat(0) : terms_[0].coef;
}

int MPoly::degree_in(int var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(var));
  return d;
}

int MPoly::min_degree_in(int var) const {
  if (terms_.empty()) return 0;
  int d = terms_.front().mono.exponent(var);
  for (const auto& t : terms_) d = std::min(d, t.mono.exponent(var));
  return d;
}

bool MPoly::is_homogeneous() const {
  for (const auto& t : terms_) {
    if (t.mono.degree() != terms_.front().mono.degree()) return false;
  }
  return true;
}

VarList merge_vars(const VarList& a, const VarList& b) {
  VarList out = a;
  for (const auto& v : b) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

MPoly MPoly::with_vars(const VarList& vars) const {
  if (vars == *vars_) return *this;
  std::vector<int> map(vars_->size(), -1);
  for (std::size_t i = 0; i < vars_->size(); ++i) {
    auto it = std::find(vars.begin(), vars.end(), (*vars_)[i]);
    if (it != vars.end()) map[i] = static_cast<int>(it - vars.begin());
  }
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] < 0 && degree_in(static_cast<int>(i)) > 0) {
      throw std::invalid_argument("variable '" + (*vars_)[i] + "' is used but missing from target list");
    }
  }
  MPoly out(vars);
  out.terms_.reserve(terms_.size());
  std::vector<int> safe_map = map;
  for (auto& m : safe_map) {
    if (m < 0) m = 0;  // exponent is zero everywhere for unmapped variables
  }
  for (const auto& t : terms_) out.terms_.push_back({remap(t.mono, safe_map), t.coef});
  std::sort(out.terms_.begin(), out.terms_.end(), term_desc);
  return out;
}

MPoly MPoly::trimmed() const {
  VarList used;
  for (int v = 0; v < nvars(); ++v) {
    if (degree_in(v) > 0) used.push_back((*vars_)[v]);
  }
  return with_vars(used);
}

namespace {

// Brings two polynomials onto a common variable list.
std::pair<MPoly, MPoly> unify(const MPoly& a, const MPoly& b) {
  if (a.vars() == b.vars()) return {a, b};
  VarList u = merge_vars(a.vars(), b.vars());
  return {a.with_vars(u), b.with_vars(u)};
}

MPoly merge_add(const MPoly& a, const MPoly& b, bool subtract) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::vector<Term> out;
  out.reserve(ta.size() + tb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ta.size() || j < tb.size()) {
    if (j == tb.size() || (i < ta.size() && tb[j].mono < ta[i].mono)) {
      out.push_back(ta[i++]);
    } else if (i == ta.size() || ta[i].mono < tb[j].mono) {
      out.push_back({tb[j].mono, subtract ? -tb[j].coef : tb[j].coef});
      ++j;
    } else {
      GaussRat c = subtract ? ta[i].coef - tb[j].coef : ta[i].coef + tb[j].coef;
      if (!c.is_zero()) out.push_back({ta[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return MPoly(a.vars(), std::move(out));
}

}  // namespace

MPoly MPoly::operator-() const {
  MPoly out = *this;
  for (auto& t : out.terms_) t.coef = -t.coef;
  return out;
}

MPoly operator+(const MPoly& a, const MPoly& b) {
  auto [x, y] = unify(a, b);
  return merge_add(x, y, false);
}

MPoly operator-(const MPoly& a, const MPoly& b) {
  auto [x, y] = unify(a, b);
  return merge_add(x, y, true);
}

MPoly operator*(const MPoly& a, const GaussRat& c) {
  if (c.is_zero()) return MPoly(a.vars());
  MPoly out = a;
  for (auto& t : out.terms_) t.coef *= c;
  return out;
}

MPoly MPoly::mul_monomial(const Monomial& m, const GaussRat& c) const {
  MPoly out(*vars_);
  if (c.is_zero()) return out;
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.mono * m, t.coef * c});
  return out;  // multiplication by a monomial preserves the order
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  auto [x, y] = unify(a, b);
  if (x.is_zero() || y.is_zero()) return MPoly(x.vars());
  if (y.size() == 1) return x.mul_monomial(y.terms_[0].mono, y.terms_[0].coef);
  if (x.size() == 1) return y.mul_monomial(x.terms_[0].mono, x.terms_[0].coef);
  std::unordered_map<Monomial::Key, GaussRat, KeyHash> acc;
  acc.reserve(x.size() * y.size());
  for (const auto& s : x.terms_) {
    for (const auto& t : y.terms_) {
      Monomial m = s.mono * t.mono;
      auto [it, inserted] = acc.try_emplace(m.key());
      it->second += s.coef * t.coef;
    }
  }
  MPoly out(x.vars());
  out.terms_.reserve(acc.size());
  for (auto& [k, c] : acc) {
    if (c.is_zero()) continue;
    int exps[kMaxVars];
    for (int v = 0; v < kMaxVars; ++v) exps[v] = static_cast<int>((k >> ((kMaxVars - 1 - v) * 16)) & 0xFFFFu);
    out.terms_.push_back({Monomial::from_exponents(exps), std::move(c)});
  }
  std::sort(out.terms_.begin(), out.terms_.end(), term_desc);
  return out;
}

MPoly MPoly::pow(unsigned e) const {
  MPoly result = constant(*vars_, GaussRat(1));
  MPoly base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

bool operator==(const MPoly& a, const MPoly& b) {
  if (a.vars() == b.vars()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coef != b.terms_[i].coef) return false;
    }
    return true;
  }
  return (a - b).is_zero();
}

MPoly MPoly::derivative(int var) const {
  MPoly out(*vars_);
  for (const auto& t : terms_) {
    int e = t.mono.exponent(var);
    if (e == 0) continue;
    Monomial m = t.mono;
    m.set_exponent(var, e - 1);
    out.terms_.push_back({m, t.coef * GaussRat(e)});
  }
  std::sort(out.terms_.begin(), out.terms_.end(), term_desc);
  return out;
}

std::vector<MPoly> MPoly::coefficients_in(int var) const {
  std::vector<MPoly> out;
  if (is_zero()) return out;
  out.assign(degree_in(var) + 1, MPoly(*vars_));
  for (const auto& t : terms_) {
    int e = t.mono.exponent(var);
    Monomial m = t.mono;
    m.set_exponent(var, 0);
    out[e].terms_.push_back({m, t.coef});
  }
  for (auto& c : out) std::sort(c.terms_.begin(), c.terms_.end(), term_desc);
  return out;
}

MPoly MPoly::from_coefficients(const VarList& vars, int var, const std::vector<MPoly>& coeffs) {
  MPoly out(vars);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    MPoly c = coeffs[k].with_vars(vars);
    for (const auto& t : c.terms_) {
      Monomial m = t.mono;
      m.set_exponent(var, m.exponent(var) + static_cast<int>(k));
      out.terms_.push_back({m, t.coef});
    }
  }
  out.normalize_terms();
  return out;
}

MPoly MPoly::substitute(std::string_view name, const MPoly& value) const {
  if (!has_var(name)) return *this;
  const int var = var_index(name);
  auto coeffs = coefficients_in(var);
  if (coeffs.empty()) return MPoly(merge_vars(*vars_, value.vars()));
  // Horner in the substituted variable.
  MPoly acc = coeffs.back();
  for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k) acc = acc * value + coeffs[k];
  return acc.with_vars(merge_vars(*vars_, value.vars()));
}

MPoly MPoly::compose(const std::vector<MPoly>& images) const {
  if (images.size() != vars_->size()) {
    throw std::invalid_argument("compose needs one image per variable");
  }
  VarList target;
  for (const auto& im : images) target = merge_vars(target, im.vars());
  std::vector<std::vector<MPoly>> powers(images.size());
  for (std::size_t v = 0; v < images.size(); ++v) {
    powers[v].push_back(MPoly::constant(target, GaussRat(1)));
    powers[v].push_back(images[v].with_vars(target));
  }
  auto power = [&](std::size_t v, int e) -> const MPoly& {
    while (static_cast<int>(powers[v].size()) <= e) powers[v].push_back(powers[v].back() * powers[v][1]);
    return powers[v][e];
  };
  MPoly out(target);
  for (const auto& t : terms_) {
    MPoly prod = MPoly::constant(target, t.coef);
    for (std::size_t v = 0; v < images.size(); ++v) {
      int e = t.mono.exponent(static_cast<int>(v));
      if (e > 0) prod = prod * power(v, e);
    }
    out += prod;
  }
  return out;
}

MPoly MPoly::homogenize(std::string_view z, int degree) const {
  if (degree < total_degree()) {
    throw std::invalid_argument("homogenize: degree " + std::to_string(degree) +
                                " below total degree " + std::to_string(total_degree()));
  }
  VarList vars = *vars_;
  if (!has_var(z)) vars.emplace_back(z);
  MPoly base = with_vars(vars);
  const int zi = base.var_index(z);
  MPoly out(vars);
  for (const auto& t : base.terms_) {
    Monomial m = t.mono;
    m.set_exponent(zi, m.exponent(zi) + degree - t.mono.degree());
    out.terms_.push_back({m, t.coef});
  }
  out.normalize_terms();
  return out;
}

MPoly MPoly::dehomogenize(std::string_view z) const {
  if (!has_var(z)) return *this;
  const int zi = var_index(z);
  VarList vars;
  std::vector<int> map(vars_->size(), 0);
  for (int v = 0; v < nvars(); ++v) {
    if (v == zi) continue;
    map[v] = static_cast<int>(vars.size());
    vars.push_back((*vars_)[v]);
  }
  MPoly out(vars);
  for (const auto& t : terms_) {
    Monomial m = t.mono;
    m.set_exponent(zi, 0);
    out.terms_.push_back({remap(m, map), t.coef});
  }
  out.normalize_terms();
  return out;
}

GaussRat MPoly::eval(std::span<const GaussRat> point) const {
  if (point.size() != vars_->size()) throw std::invalid_argument("eval: wrong number of coordinates");
  std::vector<std::vector<GaussRat>> powers(point.size());
  for (std::size_t v = 0; v < point.size(); ++v) powers[v].push_back(GaussRat(1));
  GaussRat acc;
  for (const auto& t : terms_) {
    GaussRat val = t.coef;
    for (std::size_t v = 0; v < point.size(); ++v) {
      int e = t.mono.exponent(static_cast<int>(v));
      if (e == 0) continue;
      auto& pw = powers[v];
      while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * point[v]);
      val *= pw[e];
    }
    acc += val;
  }
  return acc;
}

MPoly MPoly::eval_var(int var, const GaussRat& value) const {
  MPoly out(*vars_);
  std::vector<GaussRat> pw{GaussRat(1)};
  for (const auto& t : terms_) {
    int e = t.mono.exponent(var);
    while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * value);
    Monomial m = t.mono;
    m.set_exponent(var, 0);
    out.terms_.push_back({m, t.coef * pw[e]});
  }
  out.normalize_terms();
  return out;
}

namespace {

template <class T>
EvalResult eval_impl(const std::vector<Term>& terms, const CPoint& pt, int nvars) {
  using C = num::Cx<T>;
  std::vector<std::vector<C>> powers(nvars);
  for (int v = 0; v < nvars; ++v) {
    powers[v].push_back(C(num::Real<T>::from_double(1.0)));
    powers[v].push_back(C::from(pt.coords[v]));
  }
  C acc{};
  double scale = 0.0;
  int max_deg = 0;
  for (const auto& t : terms) {
    C val = C::from(t.coef);
    for (int v = 0; v < nvars; ++v) {
      int e = t.mono.exponent(v);
      if (e == 0) continue;
      auto& pw = powers[v];
      while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * pw[1]);
      val *= pw[e];
    }
    acc += val;
    scale += num::magnitude(val);
    max_deg = std::max(max_deg, t.mono.degree());
  }
  // Each term carries at most ~(2 deg + 2) complex roundings and the running
  // sum another (#terms); complex products contribute a sqrt(2)-ish factor.
  const double u = num::Real<T>::unit_roundoff();
  const double gamma = (4.0 * max_deg + 2.0 * static_cast<double>(terms.size()) + 4.0) * u;
  return {acc.to_std(), gamma * scale, scale};
}

}  // namespace

EvalResult MPoly::eval_complex(const CPoint& point) const {
  if (point.coords.size() != vars_->size()) {
    throw std::invalid_argument("eval_complex: wrong number of coordinates");
  }
  if (point.precision_bits > 53) return eval_impl<num::DoubleDouble>(terms_, point, nvars());
  return eval_impl<double>(terms_, point, nvars());
}

MPoly MPoly::monic() const {
  if (is_zero() || leading_coefficient().is_one()) return *this;
  return *this * leading_coefficient().inverse();
}

std::size_t MPoly::hash() const {
  std::size_t h = 0;
  for (const auto& t : terms_) {
    h = h * 1000003u ^ KeyHash{}(t.mono.key());
    h = h * 31u ^ t.coef.hash();
  }
  return h;
}

// ---------------------------------------------------------------- division

DivResult divide_with_remainder(const MPoly& f, const MPoly& g) {
  if (g.is_zero()) throw std::domain_error("division by the zero polynomial");
  auto [p, d] = std::pair<MPoly, MPoly>{f, g};
  if (p.vars() != d.vars()) {
    VarList u = merge_vars(p.vars(), d.vars());
    p = p.with_vars(u);
    d = d.with_vars(u);
  }
  const Term lead = d.leading_term();
  const GaussRat inv = lead.coef.inverse();
  std::vector<Term> q_terms;
  std::vector<Term> r_terms;
  while (!p.is_zero()) {
    const Term& lt = p.leading_term();
    if (lead.mono.divides(lt.mono)) {
      Monomial m = lt.mono / lead.mono;
      GaussRat c = lt.coef * inv;
      p = p - d.mul_monomial(m, c);
      q_terms.push_back({m, std::move(c)});
    } else {
      r_terms.push_back(lt);
      p = p - MPoly(p.vars(), {lt});
    }
  }
  return {MPoly(p.vars(), std::move(q_terms)), MPoly(p.vars(), std::move(r_terms))};
}

std::optional<MPoly> try_divide(const MPoly& f, const MPoly& g) {
  if (g.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (g.is_constant()) return f * g.constant_value().inverse();
  MPoly p = f;
  MPoly d = g;
  if (p.vars() != d.vars()) {
    VarList u = merge_vars(p.vars(), d.vars());
    p = p.with_vars(u);
    d = d.with_vars(u);
  }
  const Term lead = d.leading_term();
  const GaussRat inv = lead.coef.inverse();
  std::vector<Term> q_terms;
  while (!p.is_zero()) {
    const Term& lt = p.leading_term();
    // Under a monomial order, g | p forces lt(g) | lt(p) at every step.
    if (!lead.mono.divides(lt.mono)) return std::nullopt;
    Monomial m = lt.mono / lead.mono;
    GaussRat c = lt.coef * inv;
    p = p - d.mul_monomial(m, c);
    q_terms.push_back({m, std::move(c)});
  }
  return MPoly(d.vars(), std::move(q_terms));
}

MPoly exact_divide(const MPoly& f, const MPoly& g) {
  if (auto q = try_divide(f, g)) return *q;
  throw NotDivisible(divide_with_remainder(f, g).remainder.to_string());
}

}  // namespace webflat::poly
