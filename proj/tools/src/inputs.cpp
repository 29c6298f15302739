#include "webflat_cli/inputs.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "webflat/families.hpp"

namespace webflat::cli {

using poly::GaussRat;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const auto end = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos)));
    if (end == std::string_view::npos) return out;
    pos = end + 1;
  }
}

// Statements separated by ';' at brace depth zero.
std::vector<std::string> statements(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '{') ++depth;
    if (s[i] == '}' && --depth < 0) throw InputError("unbalanced '}' in web block");
    if (s[i] == ';' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw InputError("unbalanced '{' in web block");
  out.push_back(trim(s.substr(start)));
  std::erase_if(out, [](const std::string& t) { return t.empty(); });
  return out;
}

GaussRat number(const std::string& text) {
  static const poly::VarList none{};
  poly::MPoly c;
  try {
    c = poly::parse_poly(text, none);
  } catch (const std::exception& e) {
    throw InputError("bad number `" + text + "`: " + e.what());
  }
  if (!c.is_constant()) throw InputError("bad number `" + text + "`");
  return c.constant_value();
}

int small_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError("bad " + what + " `" + text + "`");
}

geo::LineInPlane line_from(const std::string& coeffs) {
  std::string body = trim(coeffs);
  if (body.size() >= 2 && body.front() == '<' && body.back() == '>') body = body.substr(1, body.size() - 2);
  auto parts = split(body, ',');
  if (parts.size() != 3) throw InputError("a line needs three coefficients a,b,c (a x + b y + c = 0)");
  try {
    return geo::LineInPlane(number(parts[0]), number(parts[1]), number(parts[2]));
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

bool starts_with_block(const std::string& s, std::string_view head) {
  if (s.rfind(head, 0) != 0) return false;
  return trim(std::string_view(s).substr(head.size())).starts_with("{");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Removes '#' comments to the end of the line.
std::string strip_comments(const std::string& text) {
  std::string out;
  bool comment = false;
  for (char c : text) {
    if (c == '#') comment = true;
    if (c == '\n') comment = false;
    if (!comment) out += c;
  }
  return out;
}

web::WebSpec from_block(const std::string& text) {
  const std::string t = trim(strip_comments(text));
  try {
    if (starts_with_block(t, "web")) return parse_web(t);
    if (starts_with_block(t, "foliation") || starts_with_block(t, "vectorfield")) {
      return web::WebSpec::of(fol::parse_foliation(t, "inline"));
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  throw InputError("unrecognized input `" + t.substr(0, 40) + "`");
}

}  // namespace

web::WebSpec family(std::string_view name) {
  const std::string s = trim(name);
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw InputError("unknown family `" + s + "`");
  const std::string kind = s.substr(0, colon), arg = s.substr(colon + 1);
  try {
    if (kind == "fermat") return web::WebSpec::of(fam::fermat(small_int(arg, "degree")));
    if (kind == "homog") return web::WebSpec::of(fam::homogeneous(small_int(arg, "degree")));
    if (kind == "ex3") return fam::ex3(number(arg));
    if (kind == "line") return web::WebSpec::of(line_from(arg));
    if (kind == "rand") {
      auto parts = split(arg, ':');
      if (parts.size() != 2) throw InputError("expected rand:<d>:<seed>");
      unsigned long long seed = 0;
      try {
        std::size_t used = 0;
        seed = std::stoull(parts[1], &used);
        if (used != parts[1].size()) throw InputError("bad seed `" + parts[1] + "`");
      } catch (const std::logic_error&) {
        throw InputError("bad seed `" + parts[1] + "`");
      }
      return web::WebSpec::of(fam::random_foliation(small_int(parts[0], "degree"), seed));
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  throw InputError("unknown family `" + kind + "`");
}

web::WebSpec parse_web(std::string_view text) {
  const std::string t = trim(text);
  if (!starts_with_block(t, "web") || t.back() != '}') throw InputError("expected `web { ... }`");
  const auto open = t.find('{');
  web::WebSpec out;
  for (const auto& stmt : statements(std::string_view(t).substr(open + 1, t.size() - open - 2))) {
    const auto colon = stmt.find(':');
    if (colon == std::string::npos) throw InputError("expected `line:` or `foliation:` in `" + stmt + "`");
    const std::string key = trim(std::string_view(stmt).substr(0, colon));
    const std::string value = trim(std::string_view(stmt).substr(colon + 1));
    if (key == "line") {
      out.lines.push_back(line_from(value));
    } else if (key == "foliation") {
      web::WebSpec part = value.find('{') != std::string::npos ? from_block(value) : family(value);
      if (!part.lines.empty() || part.foliations.size() != 1) {
        throw InputError("`foliation:` must name a single foliation, got " + part.describe());
      }
      out.foliations.push_back(part.foliations.front());
    } else {
      throw InputError("unknown web entry `" + key + "`");
    }
  }
  return out;
}

web::WebSpec resolve(const std::string& operand) {
  const std::string t = trim(operand);
  if (t.find('{') != std::string::npos) return from_block(t);
  std::error_code ec;
  if (std::filesystem::is_regular_file(t, ec)) return from_block(slurp(t));
  return family(t);
}

web::WebSpec resolve_all(const std::vector<std::string>& operands) {
  if (operands.empty()) throw InputError("no input given");
  web::WebSpec W;
  for (const auto& op : operands) {
    web::WebSpec part = resolve(op);
    W.lines.insert(W.lines.end(), part.lines.begin(), part.lines.end());
    W.foliations.insert(W.foliations.end(), part.foliations.begin(), part.foliations.end());
  }
  return W;
}

fol::Foliation resolve_foliation(const std::vector<std::string>& operands) {
  web::WebSpec W = resolve_all(operands);
  if (!W.lines.empty() || W.foliations.size() != 1) {
    throw InputError("expected exactly one foliation, got " + W.describe());
  }
  return W.foliations.front();
}

}  // namespace webflat::cli
