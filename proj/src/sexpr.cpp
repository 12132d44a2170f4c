#include "hoconc/sexpr.hpp"

#include <cctype>

namespace hoconc {

std::string to_string(const SourcePos& pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

ParseError::ParseError(SourcePos p, const std::string& msg)
    : Error("parse error at " + to_string(p) + ": " + msg), pos(p) {}

ScopeError::ScopeError(SourcePos p, const std::string& msg)
    : Error("scope error at " + to_string(p) + ": " + msg), pos(p) {}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (i_ < text_.size()) {
      out.push_back(read_one());
      skip_space();
    }
    return out;
  }

 private:
  SourcePos here() const { return {line_, col_}; }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == ';') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read_one() {
    SExpr e;
    e.pos = here();
    char c = text_[i_];
    if (c == ')') throw ParseError(e.pos, "unexpected ')'");
    if (c == '(') {
      e.kind = SExpr::Kind::List;
      advance();
      for (;;) {
        skip_space();
        if (i_ >= text_.size()) throw ParseError(e.pos, "unclosed '('");
        if (text_[i_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(read_one());
      }
    }
    e.kind = SExpr::Kind::Atom;
    if (c == '|') {
      e.atom.push_back(c);
      advance();
      while (i_ < text_.size() && text_[i_] != '|') {
        e.atom.push_back(text_[i_]);
        advance();
      }
      if (i_ >= text_.size()) throw ParseError(e.pos, "unterminated '|' symbol");
      e.atom.push_back('|');
      advance();
      return e;
    }
    if (c == '"') {
      e.atom.push_back(c);
      advance();
      while (i_ < text_.size() && text_[i_] != '"') {
        e.atom.push_back(text_[i_]);
        advance();
      }
      if (i_ >= text_.size()) throw ParseError(e.pos, "unterminated string");
      e.atom.push_back('"');
      advance();
      return e;
    }
    while (i_ < text_.size()) {
      char d = text_[i_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      e.atom.push_back(d);
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) { return Reader(text).read_all(); }

bool is_integer_literal(std::string_view atom) {
  std::size_t start = (!atom.empty() && atom[0] == '-') ? 1 : 0;
  if (start >= atom.size()) return false;
  for (std::size_t i = start; i < atom.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(atom[i]))) return false;
  }
  return true;
}

std::string to_string(const SExpr& e) {
  if (e.is_atom()) return e.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) out += ' ';
    out += to_string(e.items[i]);
  }
  return out + ")";
}

}  // namespace hoconc
