#include "webflat_cli/report.hpp"

namespace webflat::cli {

Json to_json(const geo::LineInPlane& l) { return l.to_string(); }

Json to_json(const std::complex<double>& z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const fol::SingularityRecord& s) {
  Json j;
  j["location"] = s.location.to_string();
  j["milnor"] = s.milnor;
  j["nu"] = s.nu;
  j["radial_order"] = s.radial_order ? Json(*s.radial_order) : Json(nullptr);
  j["contact_order"] = s.contact_order ? Json(*s.contact_order) : Json(nullptr);
  j["special"] = s.special;
  j["classified"] = s.classified;
  return j;
}

Json to_json(const web::DiscComponent& c) {
  Json j;
  j["tag"] = c.tag;
  j["description"] = c.to_string();
  if (c.kind == web::ComponentKind::dual_line) {
    j["kind"] = "dual-line";
    j["point"] = c.line->point.to_string();
    if (c.line->point.is_exact()) j["equation"] = c.line->poly().to_string();
    // Coordinates of the primal point, enough to draw the line arrangement.
    Json coords = Json::array();
    for (const auto& v : c.line->point.coords()) coords.push_back(to_json(v));
    j["coordinates"] = coords;
  } else {
    j["kind"] = "gauss-image";
    j["foliation"] = c.foliation;
    if (c.at_infinity) {
      j["curve"] = "L_inf";
    } else if (c.primal_line) {
      j["curve"] = c.primal_line->to_string();
    } else {
      j["curve"] = c.curve.to_string();
    }
  }
  return j;
}

Json to_json(const curv::FlatnessVerdict& v) {
  Json j;
  j["status"] = curv::to_string(v.status);
  j["reason"] = v.reason;
  j["seed"] = v.seed;
  j["precision_bits"] = v.precision_bits;
  j["thresholds"] = {{"flat_tol", v.flat_tol}, {"nonflat_floor", v.nonflat_floor}};
  j["rejected"] = v.rejected;
  j["witness"] = v.witness ? Json(*v.witness) : Json(nullptr);
  Json samples = Json::array();
  for (const auto& s : v.samples) {
    Json e;
    e["p"] = to_json(s.point.p);
    e["q"] = to_json(s.point.q);
    e["K_re"] = s.K.real();
    e["K_im"] = s.K.imag();
    e["scale"] = s.scale;
    e["reliable"] = s.reliable;
    if (!s.note.empty()) e["note"] = s.note;
    samples.push_back(e);
  }
  j["samples"] = samples;
  Json probes = Json::array();
  for (const auto& p : v.probes) {
    Json e;
    e["component"] = p.component;
    e["base"] = {{"p", to_json(p.base.p)}, {"q", to_json(p.base.q)}};
    e["distances"] = p.distances;
    Json mags = Json::array(), rel = Json::array(), ok = Json::array();
    for (const auto& s : p.samples) {
      mags.push_back(std::abs(s.K));
      rel.push_back(s.relative());
      ok.push_back(s.reliable);
    }
    e["K_magnitudes"] = mags;
    e["K_relative"] = rel;
    e["reliable"] = ok;
    e["growth_per_decade"] = p.growth_per_decade;
    e["bounded"] = p.bounded;
    e["pole"] = p.pole;
    e["resolved"] = p.resolved;
    probes.push_back(e);
  }
  j["probes"] = probes;
  return j;
}

Json to_json(const fam::Hypothesis& h) {
  return {{"name", h.name}, {"passed", h.passed}, {"strength", h.strength}, {"detail", h.detail}};
}

Json analyze(const fol::Foliation& F) {
  Json j;
  j["label"] = F.label();
  j["degree"] = F.degree();
  j["form"] = {{"a", F.a().to_string()}, {"b", F.b().to_string()}};

  const auto conv = fol::convexity(F);
  Json inflection;
  inflection["polynomial"] = fol::inflection_divisor(F).to_string();
  Json factors = Json::array();
  for (const auto& f : conv.factorization.factors) {
    factors.push_back({{"line", f.line.to_string()},
                       {"multiplicity", f.multiplicity},
                       {"certification", fol::to_string(f.cert)}});
  }
  inflection["line_factors"] = factors;
  inflection["residual"] = conv.factorization.residual.to_string();
  inflection["fully_split"] = conv.factorization.fully_split;
  j["inflection_divisor"] = inflection;

  Json lines = Json::array();
  for (const auto& l : conv.lines) {
    lines.push_back({{"line", l.line.to_string()},
                     {"multiplicity", l.multiplicity},
                     {"certification", fol::to_string(l.cert)}});
  }
  j["invariant_lines"] = lines;
  Json non_inv = Json::array();
  for (const auto& l : conv.non_invariant_lines) non_inv.push_back(l.to_string());
  j["convexity"] = {{"convex", fol::to_string(conv.convex)},
                    {"reduced", fol::to_string(conv.reduced)},
                    {"non_invariant_lines", non_inv},
                    {"witness", conv.witness.to_string()}};

  const auto sing = fol::singular_points(F);
  Json table = Json::array();
  int radial = 0;
  for (const auto& s : sing.points) {
    table.push_back(to_json(s));
    if (s.radial_order) ++radial;
  }
  j["singularities"] = {{"points", table},
                        {"total_milnor", sing.total_milnor},
                        {"complete", sing.complete},
                        {"radial_count", radial}};
  return j;
}

Json legendre(const web::WebSpec& W, int cross_check_samples, std::uint64_t seed) {
  Json j;
  const auto G = web::legendre(W);
  j["dual_web"] = G.poly.to_string();
  Json factors = Json::array();
  for (const auto& f : web::legendre_factors(W)) factors.push_back(f.to_string());
  j["dual_factors"] = factors;
  const auto deg = web::legendre_degree_check(W);
  j["degree"] = {{"directions", deg.directions}, {"dual_degree", deg.dual_degree}};

  const auto rep = web::discriminant_structural(W);
  Json res = Json::array();
  for (const auto& [f, m] : rep.resultant.factors) res.push_back({{"factor", f.to_string()}, {"multiplicity", m}});
  j["discriminant_resultant"] = {{"factors", res}, {"expanded", rep.resultant.expand().to_string()}};
  Json comps = Json::array();
  for (const auto& c : rep.components) comps.push_back(to_json(c));
  j["discriminant_structural"] = {{"components", comps}, {"complete", rep.complete}};

  const auto cc = web::cross_check_discriminant(rep, cross_check_samples, seed);
  Json check;
  check["certified"] = cc.certified;
  check["samples"] = cc.samples;
  check["detail"] = cc.detail;
  check["witness"] = cc.witness ? Json{{"p", to_json(cc.witness->first)}, {"q", to_json(cc.witness->second)}}
                                : Json(nullptr);
  j["cross_check"] = check;
  return j;
}

Json hypotheses(const web::WebSpec& W) {
  Json j;
  auto table = [](const fam::Scenario& s) {
    Json rows = Json::array();
    for (const auto& h : s.hypotheses) rows.push_back(to_json(h));
    return Json{{"all_passed", s.all_passed()}, {"hypotheses", rows}};
  };
  j["product_of_convex_reduced"] = table(fam::theoremA_scenario(W.lines, W.foliations));
  j["product_of_homogeneous"] = table(fam::theoremB_scenario(W.lines, W.foliations));
  return j;
}

Json describe(const web::WebSpec& W) {
  Json lines = Json::array(), fols = Json::array();
  for (const auto& l : W.lines) lines.push_back(l.to_string());
  for (const auto& F : W.foliations) {
    fols.push_back({{"label", F.label()}, {"degree", F.degree()}, {"a", F.a().to_string()}, {"b", F.b().to_string()}});
  }
  return {{"lines", lines}, {"foliations", fols}, {"dual_degree", W.dual_degree()}, {"text", W.describe()}};
}

}  // namespace webflat::cli
