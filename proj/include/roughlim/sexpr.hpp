#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace roughlim {

/// Minimal s-expression tree used by the region, ideal and sequence text
/// formats. `;` starts a comment that runs to end of line.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0;

  static SExpr make_atom(std::string a) {
    SExpr s;
    s.atom = std::move(a);
    return s;
  }
  static SExpr make_list(std::vector<SExpr> items) {
    SExpr s;
    s.is_list = true;
    s.items = std::move(items);
    return s;
  }

  /// Head symbol of a non-empty list, or the atom itself.
  const std::string& head() const;
  std::string to_string() const;
};

/// Parses every top-level expression in `text`. Throws InputError.
std::vector<SExpr> parse_sexprs(std::string_view text);
/// Parses exactly one expression.
SExpr parse_sexpr(std::string_view text);

double sexpr_number(const SExpr& e, const char* what);
long long sexpr_integer(const SExpr& e, const char* what);

/// Shortest decimal that round-trips to the same double.
std::string format_roundtrip(double v);

}  // namespace roughlim
