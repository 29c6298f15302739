// Resolution of command-line operands into foliations and webs.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "webflat/webleg.hpp"

namespace webflat::cli {

/// A user-facing input problem; the CLI maps it to a usage exit code.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// `fermat:<d>`, `homog:<d>`, `ex3:<lambda>`, `line:<a>,<b>,<c>` or
/// `rand:<d>:<seed>` as a one-component web.
web::WebSpec family(std::string_view name);

/// Reads `web { line: a,b,c; foliation: <family or inline block>; ... }`.
web::WebSpec parse_web(std::string_view text);

/// One operand: a family name, an inline `foliation`/`vectorfield`/`web`
/// block, or the path of a file holding one such block.
web::WebSpec resolve(const std::string& operand);

/// The product of all operands, validated.
web::WebSpec resolve_all(const std::vector<std::string>& operands);

/// Exactly one foliation.
fol::Foliation resolve_foliation(const std::vector<std::string>& operands);

}  // namespace webflat::cli
