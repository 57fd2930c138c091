#include "roughlim/sexpr.hpp"

#include <charconv>
#include <cmath>

#include "roughlim/errors.hpp"

namespace roughlim {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view t) : text_(t) {}

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const int line = line_;
    char c = text_[pos_];
    if (c == ')') fail("unexpected ')'");
    if (c == '(') {
      ++pos_;
      std::vector<SExpr> items;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) fail("unterminated list");
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        items.push_back(read());
      }
      SExpr e = SExpr::make_list(std::move(items));
      e.line = line;
      return e;
    }
    size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) ++pos_;
    SExpr e = SExpr::make_atom(std::string(text_.substr(start, pos_ - start)));
    e.line = line;
    return e;
  }

 private:
  static bool is_delim(char c) {
    return c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' ||
           c == '\n' || c == '\r';
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("line " + std::to_string(line_) + ": " + msg);
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

const std::string& SExpr::head() const {
  if (!is_list) return atom;
  if (items.empty() || items[0].is_list)
    throw InputError("line " + std::to_string(line) +
                     ": expected a list starting with a symbol");
  return items[0].atom;
}

std::string SExpr::to_string() const {
  if (!is_list) return atom;
  std::string s = "(";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) s += ' ';
    s += items[i].to_string();
  }
  return s + ")";
}

std::vector<SExpr> parse_sexprs(std::string_view text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

SExpr parse_sexpr(std::string_view text) {
  auto all = parse_sexprs(text);
  if (all.size() != 1)
    throw InputError("expected exactly one expression, got " +
                     std::to_string(all.size()));
  return std::move(all[0]);
}

double sexpr_number(const SExpr& e, const char* what) {
  if (e.is_list)
    throw InputError("line " + std::to_string(e.line) + ": " + what +
                     " must be a number");
  double v = 0;
  const char* b = e.atom.data();
  const char* end = b + e.atom.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v))
    throw InputError("line " + std::to_string(e.line) + ": " + what +
                     " must be a finite number, got '" + e.atom + "'");
  return v;
}

long long sexpr_integer(const SExpr& e, const char* what) {
  if (e.is_list)
    throw InputError("line " + std::to_string(e.line) + ": " + what +
                     " must be an integer");
  long long v = 0;
  const char* b = e.atom.data();
  const char* end = b + e.atom.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end)
    throw InputError("line " + std::to_string(e.line) + ": " + what +
                     " must be an integer, got '" + e.atom + "'");
  return v;
}

std::string format_roundtrip(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace roughlim
