#include "nyz/symexpr.hpp"

#include <cctype>
#include <optional>

namespace nyz::sym {

namespace {

std::string err_text(std::size_t off, const std::string& msg) {
  return "syntax error at offset " + std::to_string(off) + ": " + msg;
}

const std::map<std::string, Fun>& fun_table() {
  static const std::map<std::string, Fun> t = {
      {"exp", Fun::Exp},         {"ln", Fun::Ln},
      {"abs", Fun::Abs},         {"sign", Fun::Sign},
      {"sin", Fun::Sin},         {"cos", Fun::Cos},
      {"arctan", Fun::Arctan},   {"lambertW0", Fun::LambertW0},
      {"lambertWm1", Fun::LambertWm1},
  };
  return t;
}

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(pos, msg);
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos != s.size()) fail("unexpected trailing input");
    return e;
  }

  Expr expr() {
    Expr e = term();
    while (true) {
      if (eat('+'))
        e = e + term();
      else if (eat('-'))
        e = e - term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    while (true) {
      if (eat('*'))
        e = e * unary();
      else if (eat('/'))
        e = e / unary();
      else
        return e;
    }
  }

  Expr unary() {
    int sign = 1;
    while (true) {
      if (eat('-'))
        sign = -sign;
      else if (eat('+'))
        ;
      else
        break;
    }
    Expr e = postfix();
    return sign < 0 ? -e : e;
  }

  Expr postfix() {
    Expr e = primary();
    while (eat('^')) e = pow(e, exponent());
    return e;
  }

  Q exponent() {
    skip_ws();
    std::size_t at = pos;
    int sign = 1;
    while (true) {
      if (eat('-'))
        sign = -sign;
      else if (eat('+'))
        ;
      else
        break;
    }
    Expr e;
    if (peek() == '(') {
      eat('(');
      e = expr();
      if (!eat(')')) fail("expected ')'");
    } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
      e = number();
    } else {
      pos = at;
      fail("exponent must be a rational constant");
    }
    Expr n = normalize(e);
    if (!n.is_num()) {
      pos = at;
      fail("exponent must be a rational constant");
    }
    return sign < 0 ? -n.value() : n.value();
  }

  Expr primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      Expr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return identifier();
    fail("expected a number, variable, function or '('");
  }

  Expr number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    Q v(s.substr(start, pos - start));
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      std::size_t fs = pos;
      while (pos < s.size() &&
             std::isdigit(static_cast<unsigned char>(s[pos])))
        ++pos;
      if (fs == pos) fail("expected digits after decimal point");
      Q den(1);
      for (std::size_t i = fs; i < pos; ++i) den *= 10;
      v += Q(s.substr(fs, pos - fs)) / den;
    }
    return num(v);
  }

  int jet_index() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("malformed jet index: expected a non-negative integer");
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    return std::stoi(s.substr(start, pos - start));
  }

  Expr identifier() {
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    std::string name = s.substr(start, pos - start);

    // Jet coordinate: name[k,l,...]
    skip_ws();
    if (pos < s.size() && s[pos] == '[') {
      ++pos;
      std::vector<int> ix;
      ix.push_back(jet_index());
      while (eat(',')) ix.push_back(jet_index());
      if (!eat(']')) fail("malformed jet index: expected ',' or ']'");
      return evar(VarId::jet(name, std::move(ix)));
    }

    // Derivative primes (opaque functions only).
    int order = 0;
    while (pos < s.size() && s[pos] == '\'') {
      ++order;
      ++pos;
    }

    skip_ws();
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      Expr a = expr();
      if (!eat(')')) fail("expected ')'");
      auto it = fun_table().find(name);
      if (it != fun_table().end()) {
        if (order > 0) {
          pos = start;
          fail("derivative primes apply to opaque functions only");
        }
        return fn(it->second, a);
      }
      if (name == "sqrt") {
        if (order > 0) {
          pos = start;
          fail("derivative primes apply to opaque functions only");
        }
        return pow(a, Q(1) / 2);
      }
      if (name.rfind("lambertW", 0) == 0) {
        pos = start;
        fail("unknown function name '" + name + "'");
      }
      return opq(name, order, a);
    }
    if (order > 0) fail("expected '(' after derivative primes");

    // Plain identifier: independent variables and the dependent variables of
    // the four models are recognized; anything else is a free parameter.
    if (name == "z1" || name == "z2" || name == "t" || name == "x" ||
        name == "y")
      return evar(VarId::indep(name));
    if (name == "w" || name == "h" || name == "q")
      return evar(VarId::jet(name, {0, 0}));
    if (name == "u") return evar(VarId::jet(name, {0, 0, 0}));
    return evar(VarId::param(name));
  }
};

}  // namespace

ParseError::ParseError(std::size_t off, const std::string& msg)
    : std::runtime_error(err_text(off, msg)), offset(off) {}

Expr parse_expr(const std::string& text) {
  Parser p{text};
  return p.parse();
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Zero: return "zero";
    case Verdict::Nonzero: return "nonzero";
    case Verdict::ProbZero: return "probabilistically-zero";
  }
  return "?";
}

}  // namespace nyz::sym
