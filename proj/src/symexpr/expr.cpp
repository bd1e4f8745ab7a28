#include "nyz/expr.hpp"

#include <algorithm>
#include <sstream>

namespace nyz::sym {

double to_double(const Q& q) { return q.convert_to<double>(); }

std::string to_string(const Q& q) { return q.str(); }

std::string VarId::str() const {
  if (kind != Kind::Jet) return name;
  bool all_zero = true;
  for (int i : index) all_zero = all_zero && i == 0;
  if (all_zero) return name;
  std::ostringstream os;
  os << name << '[';
  for (std::size_t i = 0; i < index.size(); ++i)
    os << (i ? "," : "") << index[i];
  os << ']';
  return os.str();
}

const char* fun_name(Fun f) {
  switch (f) {
    case Fun::Exp: return "exp";
    case Fun::Ln: return "ln";
    case Fun::Abs: return "abs";
    case Fun::Sign: return "sign";
    case Fun::Sin: return "sin";
    case Fun::Cos: return "cos";
    case Fun::Arctan: return "arctan";
    case Fun::LambertW0: return "lambertW0";
    case Fun::LambertWm1: return "lambertWm1";
  }
  return "?";
}

namespace {

Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

const Expr& zero_expr() {
  static const Expr z = make({Node::Kind::Num, Q(0), {}, {}, Fun::Exp, "", 0});
  return z;
}

}  // namespace

Expr::Expr() : node_(zero_expr().node_) {}

Expr num(Q q) { return make({Node::Kind::Num, std::move(q), {}, {}, Fun::Exp, "", 0}); }

Expr num(long long n, long long d) { return num(Q(n) / d); }

Expr evar(VarId v) {
  return make({Node::Kind::Var, Q(0), std::move(v), {}, Fun::Exp, "", 0});
}

Expr add(ExprList kids) {
  ExprList flat;
  Q c(0);
  for (auto& k : kids) {
    if (k.kind() == Node::Kind::Add) {
      for (auto& g : k.kids()) {
        if (g.is_num())
          c += g.value();
        else
          flat.push_back(g);
      }
    } else if (k.is_num()) {
      c += k.value();
    } else {
      flat.push_back(k);
    }
  }
  if (c != 0 || flat.empty()) flat.push_back(num(c));
  if (flat.size() == 1) return flat[0];
  return make({Node::Kind::Add, Q(0), {}, std::move(flat), Fun::Exp, "", 0});
}

Expr mul(ExprList kids) {
  ExprList flat;
  Q c(1);
  for (auto& k : kids) {
    if (k.kind() == Node::Kind::Mul) {
      for (auto& g : k.kids()) {
        if (g.is_num())
          c *= g.value();
        else
          flat.push_back(g);
      }
    } else if (k.is_num()) {
      c *= k.value();
    } else {
      flat.push_back(k);
    }
  }
  if (c == 0) return num(0);
  if (c != 1 || flat.empty()) flat.insert(flat.begin(), num(c));
  if (flat.size() == 1) return flat[0];
  return make({Node::Kind::Mul, Q(0), {}, std::move(flat), Fun::Exp, "", 0});
}

Expr pow(Expr base, Q expo) {
  if (expo == 0) return num(1);
  if (expo == 1) return base;
  if (base.is_num() && denominator(expo) == 1) {
    // Exact integer power of a rational constant.
    Q b = base.value();
    long long n = expo.convert_to<long long>();
    if (b == 0 && n < 0) throw std::domain_error("pow: 0 to a negative power");
    Q r(1);
    Q f = n > 0 ? b : Q(1) / b;
    for (long long i = 0; i < (n > 0 ? n : -n); ++i) r *= f;
    return num(r);
  }
  if (base.kind() == Node::Kind::Pow) {
    Q combined = base.expo() * expo;
    return pow(base.base(), combined);
  }
  return make({Node::Kind::Pow, std::move(expo), {}, {std::move(base)},
               Fun::Exp, "", 0});
}

Expr fn(Fun f, Expr arg) {
  if (arg.is_num()) {
    const Q& v = arg.value();
    switch (f) {
      case Fun::Exp:
        if (v == 0) return num(1);
        break;
      case Fun::Ln:
        if (v == 1) return num(0);
        break;
      case Fun::Abs:
        return num(v < 0 ? -v : v);
      case Fun::Sign:
        return num(v < 0 ? -1 : (v == 0 ? 0 : 1));
      case Fun::Sin:
        if (v == 0) return num(0);
        break;
      case Fun::Cos:
        if (v == 0) return num(1);
        break;
      case Fun::Arctan:
        if (v == 0) return num(0);
        break;
      case Fun::LambertW0:
        if (v == 0) return num(0);
        break;
      default:
        break;
    }
  }
  return make({Node::Kind::Fn, Q(0), {}, {std::move(arg)}, f, "", 0});
}

Expr opq(std::string name, int order, Expr arg) {
  return make({Node::Kind::Opq, Q(0), {}, {std::move(arg)}, Fun::Exp,
               std::move(name), order});
}

bool equal(const Expr& a, const Expr& b) {
  if (a.raw() == b.raw()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Node::Kind::Num: return a.value() == b.value();
    case Node::Kind::Var: return a.var() == b.var();
    case Node::Kind::Pow:
      return a.expo() == b.expo() && equal(a.base(), b.base());
    case Node::Kind::Fn:
      return a.fn() == b.fn() && equal(a.arg(), b.arg());
    case Node::Kind::Opq:
      return a.opq_name() == b.opq_name() && a.opq_order() == b.opq_order() &&
             equal(a.arg(), b.arg());
    default: {
      if (a.kids().size() != b.kids().size()) return false;
      for (std::size_t i = 0; i < a.kids().size(); ++i)
        if (!equal(a.kids()[i], b.kids()[i])) return false;
      return true;
    }
  }
}

// ---------------------------------------------------------------------------
// Printer. Precedence: Add < Mul < unary minus < Pow < atom.

namespace {

void print_rec(std::ostringstream& os, const Expr& e, int parent_prec);

// prec: 0 add, 1 mul, 2 pow-base, 3 atom
int prec_of(const Expr& e) {
  switch (e.kind()) {
    case Node::Kind::Add: return 0;
    case Node::Kind::Mul: return 1;
    case Node::Kind::Pow: return 2;
    case Node::Kind::Num:
      return (e.value() < 0 || denominator(e.value()) != 1) ? 1 : 3;
    default: return 3;
  }
}

void print_wrapped(std::ostringstream& os, const Expr& e, int parent_prec) {
  const bool need = prec_of(e) < parent_prec;
  if (need) os << '(';
  print_rec(os, e, need ? 0 : parent_prec);
  if (need) os << ')';
}

void print_rec(std::ostringstream& os, const Expr& e, int parent_prec) {
  switch (e.kind()) {
    case Node::Kind::Num:
      os << e.value().str();
      return;
    case Node::Kind::Var:
      os << e.var().str();
      return;
    case Node::Kind::Add: {
      for (std::size_t i = 0; i < e.kids().size(); ++i) {
        const Expr& k = e.kids()[i];
        // Pull a leading negative coefficient into the join operator.
        bool neg = false;
        Expr body = k;
        if (k.is_num() && k.value() < 0) {
          neg = true;
          body = num(-k.value());
        } else if (k.kind() == Node::Kind::Mul && k.kids()[0].is_num() &&
                   k.kids()[0].value() < 0) {
          neg = true;
          ExprList kk = k.kids();
          kk[0] = num(-kk[0].value());
          body = mul(std::move(kk));
        }
        if (i == 0)
          os << (neg ? "-" : "");
        else
          os << (neg ? " - " : " + ");
        print_wrapped(os, body, 1);
      }
      return;
    }
    case Node::Kind::Mul: {
      for (std::size_t i = 0; i < e.kids().size(); ++i) {
        if (i) os << '*';
        print_wrapped(os, e.kids()[i], 2);
      }
      return;
    }
    case Node::Kind::Pow: {
      print_wrapped(os, e.base(), 3);
      os << '^';
      const Q& x = e.expo();
      if (x < 0 || denominator(x) != 1)
        os << '(' << x.str() << ')';
      else
        os << x.str();
      return;
    }
    case Node::Kind::Fn:
      os << fun_name(e.fn()) << '(';
      print_rec(os, e.arg(), 0);
      os << ')';
      return;
    case Node::Kind::Opq: {
      os << e.opq_name();
      for (int i = 0; i < e.opq_order(); ++i) os << '\'';
      os << '(';
      print_rec(os, e.arg(), 0);
      os << ')';
      return;
    }
  }
  (void)parent_prec;
}

}  // namespace

std::string print(const Expr& e) {
  std::ostringstream os;
  print_rec(os, e, 0);
  return os.str();
}

}  // namespace nyz::sym
