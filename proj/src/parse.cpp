#include "dq/parse.hpp"

#include <cctype>

#include "dq/error.hpp"

namespace dq {

int VarTable::index(const std::string& s) const {
  for (size_t k = 0; k < names.size(); ++k)
    if (names[k] == s) return static_cast<int>(k);
  auto it = aliases.find(s);
  return it == aliases.end() ? -1 : it->second;
}

VarTable xvars(int dim) {
  require(dim >= 1, "need at least one variable");
  VarTable t;
  t.names = default_names(dim);
  return t;
}

VarTable pq_vars(int dof) {
  require(dof >= 1, "need at least one degree of freedom");
  VarTable t;
  if (dof == 1) {
    t.names = {"q", "p"};
    t.aliases = {{"q1", 0}, {"p1", 1}};
  } else {
    for (int a = 1; a <= dof; ++a) t.names.push_back("q" + std::to_string(a));
    for (int a = 1; a <= dof; ++a) t.names.push_back("p" + std::to_string(a));
  }
  return t;
}

namespace {

struct Parser {
  const std::string& src;
  const VarTable& vars;
  size_t pos = 0;
  int dim;

  Parser(const std::string& s, const VarTable& v)
      : src(s), vars(v), dim(static_cast<int>(v.names.size())) {}

  [[noreturn]] void fail(const std::string& why) const {
    throw error(errc::invalid_input,
                "parse error at position " + std::to_string(pos) + ": " + why);
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool peek(char c) {
    skip_ws();
    return pos < src.size() && src[pos] == c;
  }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }

  long integer() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos == start) fail("expected integer");
    if (pos - start > 18) fail("integer literal too long");
    return std::stol(src.substr(start, pos - start));
  }

  Poly expr() {
    bool neg = false;
    skip_ws();
    if (eat('+')) {
    } else if (eat('-')) {
      neg = true;
    }
    Poly acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Poly term() {
    Poly acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }

  Poly factor() {
    Poly base = atom();
    if (eat('^')) {
      long e = integer();
      if (e > 64) fail("exponent too large");
      return base.pow(static_cast<int>(e));
    }
    return base;
  }

  Poly atom() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of input");
    char c = src[pos];
    if (c == '(') {
      ++pos;
      Poly inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long num = integer();
      if (eat('/')) {
        long den = integer();
        if (den == 0) fail("zero denominator");
        return Poly::constant(dim, Scalar::ratio(num, den));
      }
      return Poly::constant(dim, Scalar(num));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      std::string name = src.substr(start, pos - start);
      if (name == "i") return Poly::constant(dim, Scalar::i());
      int idx = vars.index(name);
      if (idx < 0) fail("unknown variable '" + name + "'");
      return Poly::variable(dim, idx);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Poly parse_poly(const std::string& text, const VarTable& vars) {
  Parser p(text, vars);
  Poly result = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return result;
}

}  // namespace dq
