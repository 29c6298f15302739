#include "webflat_cli/suite.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>
#include <sstream>

namespace webflat::cli {

using curv::Cplx;
using curv::DualPoint;
using curv::FlatStatus;
using fam::fermat;
using fam::homogeneous;
using poly::GaussRat;
using poly::MPoly;
using web::WebSpec;

namespace {

const poly::VarList& xy() {
  static const poly::VarList v{"x", "y"};
  return v;
}
const poly::VarList& xyz() {
  static const poly::VarList v{"x", "y", "z"};
  return v;
}
const poly::VarList& pq() {
  static const poly::VarList v{"p", "q"};
  return v;
}

const char* const kNames[kSuiteSize] = {
    "inflection divisor has degree 3d",
    "fermat(2) invariant lines and inflection divisor",
    "fermat tangencies are reduced invariant lines iff d = 2l - 1",
    "fermat(2) discriminant: resultant and structural agree",
    "two lines with fermat(2) and fermat(3) is flat",
    "fermat(3) with fermat(5) is flat",
    "line with homogeneous 3, 4, 5 is flat",
    "non-flat witnesses",
    "homothety scaling of the curvature",
    "numerical core properties",
};

CriterionResult entry(int id) {
  CriterionResult r;
  r.id = id;
  r.name = kNames[id - 1];
  return r;
}

geo::LineInPlane L(long a, long b, long c) { return {GaussRat(a), GaussRat(b), GaussRat(c)}; }

bool same_up_to_unit(const MPoly& a, const MPoly& b) { return a.monic() == b.monic(); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::vector<DualPoint> points(int n, std::uint64_t seed, double box) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<DualPoint> out;
  for (int k = 0; k < n; ++k) out.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
  return out;
}

// Largest relative |K| among reliable samples.
double worst_relative(const curv::FlatnessVerdict& v) {
  double w = 0.0;
  for (const auto& s : v.samples) {
    if (s.reliable) w = std::max(w, s.relative());
  }
  return w;
}

CriterionResult flat_entry(int id, const WebSpec& W, const SuiteConfig& cfg) {
  CriterionResult r = entry(id);
  auto v = curv::flatness_test(W, cfg.flatness());
  const bool probes_ok = std::all_of(v.probes.begin(), v.probes.end(),
                                     [](const curv::Probe& p) { return p.bounded && p.resolved; });
  const double deepest = v.probes.empty() ? 0.0 : v.probes.front().distances.back();
  r.passed = v.status == FlatStatus::flat_consistent && probes_ok && deepest <= 1e-5 * (1 + 1e-9);
  r.detail = W.describe() + ": " + curv::to_string(v.status) + ", worst |K|/scale " + fmt(worst_relative(v)) + ", " +
             std::to_string(v.probes.size()) + " probes to " + fmt(deepest);
  r.data = {{"web", W.describe()}, {"verdict", to_json(v)}};
  return r;
}

CriterionResult inflection_degree(const SuiteConfig&) {
  CriterionResult r = entry(1);
  Json rows = Json::array();
  bool ok = true;
  for (int d = 2; d <= 5; ++d) {
    std::vector<fol::Foliation> fs{fermat(d), homogeneous(d)};
    for (std::uint64_t s = 1; s <= 5; ++s) fs.push_back(fam::random_foliation(d, s));
    for (const auto& F : fs) {
      const int deg = fol::inflection_divisor(F).total_degree();
      ok = ok && F.degree() == d && deg == 3 * d;
      rows.push_back({{"foliation", F.label()}, {"d", F.degree()}, {"deg_I", deg}});
    }
  }
  r.passed = ok;
  r.detail = std::to_string(rows.size()) + " foliations, d in 2..5";
  r.data = {{"foliations", rows}};
  return r;
}

CriterionResult fermat_lines(const SuiteConfig&) {
  CriterionResult r = entry(2);
  const auto F = fermat(2);
  const std::vector<geo::LineInPlane> expect{L(1, 0, 0), L(0, 1, 0), L(0, 0, 1), L(1, 0, -1), L(0, 1, -1), L(1, -1, 0)};
  auto got = fol::invariant_lines(F);
  std::set<geo::LineInPlane> have;
  Json lines = Json::array();
  for (const auto& l : got) {
    have.insert(l.line);
    lines.push_back(l.line.to_string());
  }
  const bool lines_ok = have == std::set<geo::LineInPlane>(expect.begin(), expect.end()) && got.size() == 6;
  MPoly product = MPoly::constant(xyz(), GaussRat(1));
  for (const auto& l : expect) product *= l.poly();
  const MPoly I = fol::inflection_divisor(F);
  const bool divisor_ok = same_up_to_unit(I, product);
  r.passed = lines_ok && divisor_ok;
  r.detail = std::to_string(got.size()) + " invariant lines; I(F) " + (divisor_ok ? "=" : "!=") + " their product";
  r.data = {{"lines", lines}, {"inflection_divisor", I.to_string()}};
  return r;
}

CriterionResult fermat_tangency(const SuiteConfig&) {
  CriterionResult r = entry(3);
  Json rows = Json::array();
  bool ok = true;
  auto row = [&](int l, int d, bool expect) {
    auto t = fam::tangency_lines(fermat(l), fermat(d));
    const bool good = t.lines_only && t.invariant && t.reduced;
    ok = ok && good == expect;
    rows.push_back({{"l", l}, {"d", d}, {"reduced_invariant", good}, {"expected", expect}, {"floating", t.floating}});
  };
  for (auto [l, d] : {std::pair{2, 3}, std::pair{3, 5}}) row(l, d, true);
  for (auto [l, d] : {std::pair{2, 4}, std::pair{3, 4}, std::pair{2, 5}, std::pair{4, 6}}) row(l, d, false);
  r.passed = ok;
  r.detail = ok ? "all six pairs as expected" : "mismatch, see data";
  r.data = {{"pairs", rows}};
  return r;
}

CriterionResult fermat_discriminant(const SuiteConfig& cfg) {
  CriterionResult r = entry(4);
  const WebSpec W = WebSpec::of(fermat(2));
  const MPoly disc = web::discriminant_resultant(W);
  const MPoly expect = poly::parse_poly("p*q*(p+q-1)", pq());
  const bool res_ok = same_up_to_unit(disc, expect);

  const auto rep = web::discriminant_structural(W);
  std::set<std::string> want{geo::ProjPoint::affine(GaussRat(0), GaussRat(0)).to_string(),
                             geo::ProjPoint::affine(GaussRat(1), GaussRat(1)).to_string(),
                             geo::ProjPoint::exact(GaussRat(1), GaussRat(0), GaussRat(0)).to_string()};
  std::set<std::string> got;
  bool all_lines = true;
  for (const auto& c : rep.components) {
    if (c.kind == web::ComponentKind::dual_line) {
      // The dual of [0:1:0] is the line at infinity of the (p, q) chart,
      // where the resultant cannot see it.
      if (!c.line->at_infinity()) got.insert(c.line->point.to_string());
    } else {
      all_lines = false;
    }
  }
  const auto cc = web::cross_check_discriminant(rep, 200, cfg.seed);
  r.passed = res_ok && all_lines && got == want && cc.certified && cc.samples >= 200;
  r.detail = "disc = " + disc.to_string() + "; " + std::to_string(rep.components.size()) + " components; cross-check " +
             (cc.certified ? "certified" : "failed: " + cc.detail);
  Json comps = Json::array();
  for (const auto& c : rep.components) comps.push_back(to_json(c));
  r.data = {{"resultant", disc.to_string()}, {"components", comps}, {"cross_check_samples", cc.samples}};
  return r;
}

CriterionResult non_flat(const SuiteConfig& cfg) {
  CriterionResult r = entry(8);
  auto ex = curv::flatness_test(fam::ex3(GaussRat(2)), cfg.flatness());
  bool pole = false;
  double growth = 0.0;
  for (const auto& p : ex.probes) {
    if (p.component.find("[tangency]") == std::string::npos) continue;
    pole = pole || (p.pole && p.growth_per_decade >= 10.0);
    growth = std::max(growth, p.growth_per_decade);
  }
  const bool ex_ok = ex.status == FlatStatus::non_flat && pole && ex.witness &&
                     ex.samples[*ex.witness].relative() > cfg.nonflat_floor;

  const WebSpec R = WebSpec::of(fam::random_foliation(2, 7)) * WebSpec::of(L(1, 2, 3));
  auto rv = curv::flatness_test(R, cfg.flatness());
  const bool rand_ok =
      rv.status == FlatStatus::non_flat && rv.witness && rv.samples[*rv.witness].relative() > cfg.nonflat_floor;

  r.passed = ex_ok && rand_ok;
  r.detail = "ex3(2): " + curv::to_string(ex.status) + ", tangency growth " + fmt(growth) + "/decade; " +
             R.describe() + ": " + curv::to_string(rv.status) + ", witness |K|/scale " +
             fmt(rv.witness ? rv.samples[*rv.witness].relative() : 0.0);
  r.data = {{"ex3", to_json(ex)}, {"random_with_line", to_json(rv)}};
  return r;
}

CriterionResult homothety(const SuiteConfig& cfg) {
  CriterionResult r = entry(9);
  const WebSpec W = WebSpec::of(homogeneous(3)) * WebSpec::of(homogeneous(4));
  curv::CurvatureOptions opts;
  opts.precision_bits = cfg.precision_bits;
  // lambda = 2 only rescales by powers of two, which binary floating point
  // does exactly; 3 and a complex factor exercise the rounding as well.
  const std::vector<Cplx> lambdas{2.0, 3.0, Cplx(1.7, 0.4)};
  const auto pts = points(20, cfg.seed ^ 0x40707, 1.0);
  double worst = 0.0, worst_required = 0.0;
  Json rows = Json::array();
  for (const Cplx& lambda : lambdas) {
    Json errs = Json::array();
    for (const auto& P : pts) {
      auto h = curv::homothety_scaling_check(W, P.p, P.q, lambda, opts);
      worst = std::max(worst, h.relative_error);
      if (lambda == 2.0) worst_required = std::max(worst_required, h.relative_error);
      errs.push_back(h.relative_error);
    }
    rows.push_back({{"lambda", to_json(lambda)}, {"relative_errors", errs}});
  }
  r.passed = pts.size() == 20 && worst < 1e-8;
  r.detail = "20 points, worst relative error " + fmt(worst_required) + " at lambda = 2, " + fmt(worst) +
             " over lambda in {2, 3, 1.7+0.4i}";
  r.data = {{"checks", rows}};
  return r;
}

// Central differences of the slopes and their first partials against the
// analytic values, at steps h and h/2.
std::pair<double, double> partial_errors(const curv::DualWeb& D, const DualPoint& P, double h) {
  using curv::DoubleDouble;
  auto base = curv::slopes_at<DoubleDouble>(D, P);
  auto fp = curv::slopes_at<DoubleDouble>(D, {P.p + h, P.q});
  auto fm = curv::slopes_at<DoubleDouble>(D, {P.p - h, P.q});
  auto gp = curv::slopes_at<DoubleDouble>(D, {P.p, P.q + h});
  auto gm = curv::slopes_at<DoubleDouble>(D, {P.p, P.q - h});
  const int n = static_cast<int>(base.slopes.size());
  auto near = [&](const curv::SlopeFan& f, int i) {
    int best = 0;
    for (int j = 1; j < n; ++j) {
      if (std::abs(f.slopes[j].to_std() - base.slopes[i].to_std()) <
          std::abs(f.slopes[best].to_std() - base.slopes[i].to_std()))
        best = j;
    }
    return best;
  };
  double e1 = 0.0, e2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const int a = near(fp, i), b = near(fm, i), c = near(gp, i), d = near(gm, i);
    Cplx mp = (fp.slopes[a].to_std() - fm.slopes[b].to_std()) / (2 * h);
    Cplx mq = (gp.slopes[c].to_std() - gm.slopes[d].to_std()) / (2 * h);
    e1 = std::max(e1, std::abs(mp - base.first_partials[i][0].to_std()) +
                          std::abs(mq - base.first_partials[i][1].to_std()));
    Cplx mpp = (fp.first_partials[a][0].to_std() - fm.first_partials[b][0].to_std()) / (2 * h);
    Cplx mpq = (gp.first_partials[c][0].to_std() - gm.first_partials[d][0].to_std()) / (2 * h);
    Cplx mqq = (gp.first_partials[c][1].to_std() - gm.first_partials[d][1].to_std()) / (2 * h);
    e2 = std::max(e2, std::abs(mpp - base.second_partials[i][0].to_std()) +
                          std::abs(mpq - base.second_partials[i][1].to_std()) +
                          std::abs(mqq - base.second_partials[i][2].to_std()));
  }
  return {e1, e2};
}

CriterionResult numerical_core(const SuiteConfig& cfg) {
  CriterionResult r = entry(10);
  std::vector<std::string> failures;
  Json data;

  // Finite-difference convergence of the slope partials.
  const auto D = curv::DualWeb::of(WebSpec::of(fermat(2)) * WebSpec::of(fermat(3)));
  double worst_ratio = 1e300;
  for (const auto& P : points(3, cfg.seed ^ 0xfd, 0.8)) {
    try {
      auto [a1, a2] = partial_errors(D, P, 1e-3);
      auto [b1, b2] = partial_errors(D, P, 5e-4);
      worst_ratio = std::min({worst_ratio, a1 / b1, a2 / b2});
    } catch (const curv::SlopeError&) {
      // A point next to the discriminant; the others still count.
    }
  }
  data["fd_ratio"] = worst_ratio;
  if (!(worst_ratio >= 3.5 && worst_ratio < 1e300)) failures.push_back("fd ratio " + fmt(worst_ratio));

  // eta consistency on a flat and a non-flat web.
  curv::CurvatureOptions opts;
  opts.precision_bits = cfg.precision_bits;
  double eta = 0.0;
  const auto E = curv::DualWeb::of(fam::ex3(GaussRat(2)));
  for (const auto* W : {&D, &E}) {
    for (const auto& P : points(10, cfg.seed ^ 0xe7a, 1.5)) {
      auto s = curv::curvature_at(*W, P, opts);
      if (s.note.rfind("degree drop", 0) == 0 || s.note.rfind("near-discriminant", 0) == 0) continue;
      eta = std::max(eta, s.eta_residual);
    }
  }
  data["eta_residual"] = eta;
  if (!(eta < 1e-9)) failures.push_back("eta residual " + fmt(eta));

  // Three pencils of parallel lines in the dual chart: K = 0 identically.
  const curv::DualWeb T(web::ImplicitWeb{poly::parse_poly("x*(x-1)*(x+1)", {"p", "q", "x"}), web::Convention::dual, 3});
  double trivial = 0.0;
  for (const auto& P : points(5, cfg.seed ^ 0x3e, 1.5)) trivial = std::max(trivial, std::abs(curv::curvature_at(T, P, opts).K));
  data["trivial_K"] = trivial;
  if (!(trivial <= 1e-12)) failures.push_back("trivial 3-web |K| " + fmt(trivial));

  // The expansion of K over sub-webs with at most two of the lines.
  const DualPoint P{{0.31, 0.2}, {-0.45, 0.6}};
  const std::vector<std::vector<WebSpec>> fixtures{
      {WebSpec::of(L(1, 2, 3)), WebSpec::of(L(2, -1, 1)), WebSpec::of(fermat(2))},
      {WebSpec::of(L(1, 2, 3)), WebSpec::of(L(2, -1, 1)),
       WebSpec::of(fol::Foliation::from_form(poly::parse_poly("y", xy()), poly::parse_poly("x", xy())))},
      {WebSpec::of(L(1, 2, 3)), WebSpec::of(L(2, -1, 1)), WebSpec::of(L(1, 1, -2)), WebSpec::of(fermat(3))}};
  Json residuals = Json::array();
  for (const auto& parts : fixtures) {
    const double res = curv::curvature_expansion_check(parts, P, 0.0, opts).residual;
    residuals.push_back(res);
    if (!(res < 1e-8)) failures.push_back("expansion residual " + fmt(res));
  }
  data["expansion_residuals"] = residuals;

  r.passed = failures.empty();
  if (r.passed) {
    r.detail = "fd ratio " + fmt(worst_ratio) + ", eta residual " + fmt(eta) + ", trivial |K| " + fmt(trivial);
  } else {
    for (const auto& f : failures) r.detail += (r.detail.empty() ? "" : "; ") + f;
  }
  r.data = data;
  return r;
}

}  // namespace

curv::FlatnessConfig SuiteConfig::flatness() const {
  curv::FlatnessConfig c;
  c.samples = samples;
  c.seed = seed;
  c.flat_tol = flat_tol;
  c.nonflat_floor = nonflat_floor;
  c.precision_bits = precision_bits;
  c.probe_decades = probe_decades;
  return c;
}

bool SuiteResult::all_passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

Json SuiteResult::to_json() const {
  Json rows = Json::array();
  for (const auto& c : criteria) {
    rows.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"data", c.data}});
  }
  return {{"criteria", rows}, {"all_passed", all_passed()}};
}

CriterionResult run_criterion(int id, const SuiteConfig& cfg) {
  if (id < 1 || id > kSuiteSize) throw std::out_of_range("no suite entry " + std::to_string(id));
  switch (id) {
    case 1:
      return inflection_degree(cfg);
    case 2:
      return fermat_lines(cfg);
    case 3:
      return fermat_tangency(cfg);
    case 4:
      return fermat_discriminant(cfg);
    case 5:
      return flat_entry(5, WebSpec::of(L(1, -1, 0)) * WebSpec::of(L(1, 0, 0)) * WebSpec::of(fermat(2)) *
                            WebSpec::of(fermat(3)),
                        cfg);
    case 6:
      return flat_entry(6, WebSpec::of(fermat(3)) * WebSpec::of(fermat(5)), cfg);
    case 7: {
      auto r = flat_entry(7, WebSpec::of(L(1, -1, 0)) * WebSpec::of(homogeneous(3)) * WebSpec::of(homogeneous(4)) *
                              WebSpec::of(homogeneous(5)),
                          cfg);
      const auto P = [](const std::string& s) { return poly::parse_poly(s, xy()); };
      const bool tang = same_up_to_unit(fol::tangency_affine(homogeneous(3), homogeneous(4)), P("x^3*y^3*(y-x)")) &&
                        same_up_to_unit(fol::tangency_affine(homogeneous(3), homogeneous(5)), P("x^3*y^3*(y^2-x^2)")) &&
                        same_up_to_unit(fol::tangency_affine(homogeneous(4), homogeneous(5)), P("x^4*y^4*(y-x)"));
      r.passed = r.passed && tang;
      r.detail += tang ? "; tangencies exact" : "; tangency mismatch";
      r.data["tangencies_exact"] = tang;
      return r;
    }
    case 8:
      return non_flat(cfg);
    case 9:
      return homothety(cfg);
    case 10:
      return numerical_core(cfg);
    default:
      throw std::out_of_range("no suite entry " + std::to_string(id));
  }
}

SuiteResult run_suite(const SuiteConfig& cfg, const std::function<void(const CriterionResult&)>& progress) {
  SuiteResult out;
  for (int id = 1; id <= kSuiteSize; ++id) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = run_criterion(id, cfg);
    } catch (const std::exception& e) {
      r = entry(id);
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress) progress(r);
    out.criteria.push_back(std::move(r));
  }
  return out;
}

}  // namespace webflat::cli
