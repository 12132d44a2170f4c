#pragma once

#include "hoconc/common.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hoconc {

/// Minimal s-expression tree used for program files and solver output.
struct SExpr {
  enum class Kind { Atom, List };
  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<SExpr> items;
  SourcePos pos;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  bool is_atom(std::string_view text) const { return is_atom() && atom == text; }
};

/// Reads every top-level form. `;` starts a comment running to end of line.
/// `|...|` atoms (SMT-LIB quoted symbols) are kept verbatim, pipes included.
/// Throws ParseError on unbalanced parentheses.
std::vector<SExpr> read_sexprs(std::string_view text);

bool is_integer_literal(std::string_view atom);

std::string to_string(const SExpr& e);

}  // namespace hoconc
