#include "webflat_cli/app.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "webflat_cli/inputs.hpp"
#include "webflat_cli/report.hpp"
#include "webflat_cli/suite.hpp"

namespace webflat::cli {

namespace {

Json config_echo(const RunConfig& c) {
  return {{"command", c.command},
          {"inputs", c.inputs},
          {"samples", c.samples},
          {"seed", c.seed},
          {"flat_tol", c.flat_tol},
          {"nonflat_floor", c.nonflat_floor},
          {"precision_bits", c.precision_bits},
          {"probe_decades", c.probe_decades}};
}

Json envelope(const RunConfig& c, Json result) {
  return {{"schema", kSchema},
          {"tool", {{"name", "webflat"}, {"version", kVersion}}},
          {"config", config_echo(c)},
          {"result", std::move(result)}};
}

SuiteConfig suite_config(const RunConfig& c) {
  SuiteConfig s;
  s.samples = c.samples;
  s.seed = c.seed;
  s.flat_tol = c.flat_tol;
  s.nonflat_floor = c.nonflat_floor;
  s.precision_bits = c.precision_bits;
  s.probe_decades = c.probe_decades;
  return s;
}

void emit(const RunConfig& c, const Json& doc, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + c.out);
}

int flatness_exit(curv::FlatStatus s) {
  switch (s) {
    case curv::FlatStatus::flat_consistent:
      return kFlat;
    case curv::FlatStatus::non_flat:
      return kNonFlat;
    case curv::FlatStatus::inconclusive:
      return kInconclusive;
  }
  return kInconclusive;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.command == "analyze") {
    const auto F = resolve_foliation(c.inputs);
    Json result = analyze(F);
    emit(c, envelope(c, result), out);
    return 0;
  }
  if (c.command == "legendre") {
    const auto W = resolve_all(c.inputs);
    W.validate();
    Json result = legendre(W, c.samples, c.seed);
    result["input"] = describe(W);
    emit(c, envelope(c, result), out);
    return 0;
  }
  if (c.command == "flatness") {
    const auto W = resolve_all(c.inputs);
    W.validate();
    curv::FlatnessConfig fc = suite_config(c).flatness();
    const auto v = curv::flatness_test(W, fc);
    Json result = to_json(v);
    result["input"] = describe(W);
    result["hypotheses"] = hypotheses(W);
    emit(c, envelope(c, result), out);
    return flatness_exit(v.status);
  }
  if (c.command == "paper-suite") {
    auto progress = [&](const CriterionResult& r) {
      err << std::setw(3) << r.id << "  " << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  ("
          << std::fixed << std::setprecision(1) << r.seconds << " s)\n"
          << std::defaultfloat << "       " << r.detail << "\n";
    };
    const auto s = run_suite(suite_config(c), progress);
    int passed = 0;
    for (const auto& r : s.criteria) passed += r.passed;
    err << passed << "/" << s.criteria.size() << " passed\n";
    emit(c, envelope(c, s.to_json()), out);
    return s.all_passed() ? 0 : 1;
  }
  throw std::logic_error("unknown command " + c.command);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Flatness of webs built from lines and foliations on the projective plane", "webflat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto numeric = [&](CLI::App* sub) {
    sub->add_option("--samples", c.samples, "generic curvature samples (also cross-check samples)")
        ->envname("WEBFLAT_SAMPLES")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "seed for every random choice")->envname("WEBFLAT_SEED")->check(CLI::PositiveNumber);
    sub->add_option("--flat-tol", c.flat_tol, "largest |K|/scale accepted as zero")
        ->envname("WEBFLAT_FLAT_TOL")
        ->check(CLI::PositiveNumber);
    sub->add_option("--nonflat-floor", c.nonflat_floor, "smallest |K|/scale accepted as nonzero")
        ->envname("WEBFLAT_NONFLAT_FLOOR")
        ->check(CLI::PositiveNumber);
    sub->add_option("--precision", c.precision_bits, "floating precision in bits")
        ->envname("WEBFLAT_PRECISION")
        ->check(CLI::IsMember({53, 106}));
    sub->add_option("--probes", c.probe_decades, "decades probed toward each discriminant component")
        ->envname("WEBFLAT_PROBES")
        ->check(CLI::Range(1, 12));
    sub->add_option("--out", c.out, "write the report here instead of standard output")->envname("WEBFLAT_OUT");
    sub->add_option("--format", c.format, "report format")->envname("WEBFLAT_FORMAT")->check(CLI::IsMember({"json"}));
  };
  struct Cmd {
    const char* name;
    const char* help;
    bool operands;
  };
  for (const Cmd& cmd : {Cmd{"analyze", "inflection divisor, invariant lines, convexity and singularities", true},
                         Cmd{"legendre", "dual web and both discriminants", true},
                         Cmd{"flatness", "certify or refute flatness of the dual web (exit 0/1/2)", true},
                         Cmd{"paper-suite", "run the reproduction matrix", false}}) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    numeric(sub);
    if (cmd.operands) {
      sub->add_option("inputs", c.inputs, "family names, inline blocks or files")->required();
    }
    sub->callback([&c, sub] { c.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    return dispatch(c, out, err);
  } catch (const InputError& e) {
    err << "webflat: " << e.what() << "\n";
    return kBadInput;
  } catch (const poly::ParseError& e) {
    err << "webflat: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    err << "webflat: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    err << "webflat: internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace webflat::cli
