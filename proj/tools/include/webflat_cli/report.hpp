// JSON payloads of the CLI commands. Keys are sorted (nlohmann::json keeps
// objects in std::map order) and exact data is printed as canonical text,
// so equal inputs give byte-identical documents.
#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "webflat/curvature.hpp"
#include "webflat/families.hpp"

namespace webflat::cli {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "webflat-report/1";
inline constexpr const char* kVersion = "0.1.0";

Json to_json(const geo::LineInPlane& l);
Json to_json(const std::complex<double>& z);
Json to_json(const fol::SingularityRecord& s);
Json to_json(const web::DiscComponent& c);
Json to_json(const curv::FlatnessVerdict& v);
Json to_json(const fam::Hypothesis& h);

/// Degree, inflection divisor with its line factors, invariant lines,
/// convexity and the singularity table of one foliation.
Json analyze(const fol::Foliation& F);

/// Dual web, degree data, both discriminants and their cross-check.
Json legendre(const web::WebSpec& W, int cross_check_samples, std::uint64_t seed);

/// Both sets of flatness hypotheses evaluated on the members of the web.
Json hypotheses(const web::WebSpec& W);

/// The members of a web, for the report header.
Json describe(const web::WebSpec& W);

}  // namespace webflat::cli
