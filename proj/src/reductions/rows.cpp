#include "nyz/reductions.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nyz::red {

namespace {

using sym::Q;

const VarId kZ1 = VarId::indep("z1");
const VarId kZ2 = VarId::indep("z2");
const VarId kOmega = VarId::param("omega");
const VarId kA = VarId::param("a");

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool has_opq(const Expr& e, const std::string& name) {
  if (e.kind() == Expr::Kind::Opq && e.opq_name() == name) return true;
  for (const Expr& k : e.kids())
    if (has_opq(k, name)) return true;
  return false;
}

// Matches c * ln(B) with rational c, e.g. the argument of a power atom.
std::optional<std::pair<Q, Expr>> as_rat_ln(const Expr& arg) {
  if (arg.kind() == Expr::Kind::Fn && arg.fn() == sym::Fun::Ln)
    return std::pair<Q, Expr>{Q(1), arg.arg()};
  if (arg.kind() == Expr::Kind::Mul && arg.kids().size() == 2) {
    const Expr& a = arg.kids()[0];
    const Expr& b = arg.kids()[1];
    const Expr* n = a.is_num() ? &a : (b.is_num() ? &b : nullptr);
    const Expr* l = a.is_num() ? &b : &a;
    if (n && l->kind() == Expr::Kind::Fn && l->fn() == sym::Fun::Ln)
      return std::pair<Q, Expr>{n->value(), l->arg()};
  }
  return std::nullopt;
}

// exp(c ln B)^k == B^floor(ck) * exp(frac ln B). Folding the whole part
// into an explicit power lets the two spellings of B^(p/2) cancel, which
// the rational normal form alone cannot do.
Expr fold_explog(const Expr& e) {
  auto rebuild = [](const Q& t, const Expr& base) -> std::optional<Expr> {
    using boost::multiprecision::cpp_int;
    cpp_int p = numerator(t), q = denominator(t);
    cpp_int whole = p / q, rem = p % q;
    if (rem < 0) {
      rem += q;
      whole -= 1;
    }
    if (whole == 0) return std::nullopt;  // nothing to fold
    Expr out = sym::pow(base, Q(whole));
    if (rem != 0)
      out = out * sym::fn(sym::Fun::Exp,
                          sym::num(Q(rem) / Q(q)) * sym::fn(sym::Fun::Ln, base));
    return out;
  };
  switch (e.kind()) {
    case Expr::Kind::Num:
    case Expr::Kind::Var:
      return e;
    case Expr::Kind::Add: {
      sym::ExprList kids;
      for (const Expr& k : e.kids()) kids.push_back(fold_explog(k));
      return sym::add(std::move(kids));
    }
    case Expr::Kind::Mul: {
      sym::ExprList kids;
      for (const Expr& k : e.kids()) kids.push_back(fold_explog(k));
      return sym::mul(std::move(kids));
    }
    case Expr::Kind::Pow: {
      Expr base = fold_explog(e.base());
      if (base.kind() == Expr::Kind::Fn && base.fn() == sym::Fun::Exp)
        if (auto m = as_rat_ln(base.arg()))
          if (auto r = rebuild(m->first * e.expo(), fold_explog(m->second)))
            return *r;
      return sym::pow(base, e.expo());
    }
    case Expr::Kind::Fn: {
      Expr arg = fold_explog(e.arg());
      if (e.fn() == sym::Fun::Exp)
        if (auto m = as_rat_ln(arg))
          if (auto r = rebuild(m->first, fold_explog(m->second))) return *r;
      return sym::fn(e.fn(), arg);
    }
    case Expr::Kind::Opq:
      return sym::opq(e.opq_name(), e.opq_order(), fold_explog(e.arg()));
  }
  return e;
}

// z1 < 0 chart: every ln(z1) becomes ln(-z1), including inside opaque
// arguments; d/dz1 ln(-z1) = 1/z1 keeps the identities intact.
Expr flip_ln_z1(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Num:
    case Expr::Kind::Var:
      return e;
    case Expr::Kind::Add: {
      sym::ExprList kids;
      for (const Expr& k : e.kids()) kids.push_back(flip_ln_z1(k));
      return sym::add(std::move(kids));
    }
    case Expr::Kind::Mul: {
      sym::ExprList kids;
      for (const Expr& k : e.kids()) kids.push_back(flip_ln_z1(k));
      return sym::mul(std::move(kids));
    }
    case Expr::Kind::Pow:
      return sym::pow(flip_ln_z1(e.base()), e.expo());
    case Expr::Kind::Fn:
      if (e.fn() == sym::Fun::Ln && e.arg().kind() == Expr::Kind::Var &&
          e.arg().var() == kZ1)
        return sym::fn(sym::Fun::Ln, -sym::evar(kZ1));
      return sym::fn(e.fn(), flip_ln_z1(e.arg()));
    case Expr::Kind::Opq:
      return sym::opq(e.opq_name(), e.opq_order(), flip_ln_z1(e.arg()));
  }
  return e;
}

std::vector<AnsatzRow> load_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reduction table " + path);
  std::vector<AnsatzRow> rows;
  std::string line;
  int lineno = 0;
  bool header = false;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream ls(s);
    std::string kw;
    ls >> kw;
    if (kw == "catalog") {
      std::string id, verkw;
      int ver = 0;
      ls >> id >> verkw >> ver;
      if (id != "table1" || verkw != "version" || ver < 1)
        fail("bad catalog header");
      header = true;
      continue;
    }
    if (kw == "space") continue;
    if (kw != "row") fail("unknown keyword '" + kw + "'");
    if (!header) fail("row before catalog header");
    std::string rest = trim(s.substr(s.find("row") + 3));
    size_t bar = rest.find('|');
    if (bar == std::string::npos) fail("row without fields");
    AnsatzRow row;
    row.id = trim(rest.substr(0, bar));
    std::map<std::string, std::string> fields;
    std::string tail = rest.substr(bar + 1);
    size_t pos = 0;
    while (pos <= tail.size()) {
      size_t next = tail.find('|', pos);
      std::string field =
          trim(next == std::string::npos ? tail.substr(pos)
                                         : tail.substr(pos, next - pos));
      if (!field.empty()) {
        size_t colon = field.find(':');
        if (colon == std::string::npos) fail("field without ':'");
        fields[trim(field.substr(0, colon))] = trim(field.substr(colon + 1));
      }
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    for (const char* key : {"gen", "lift", "h", "omega", "reduced"})
      if (!fields.count(key))
        fail("row " + row.id + " misses field '" + key + "'");
    row.gen = fields["gen"];
    row.lift = fields["lift"];
    if (fields.count("factor"))
      row.factor = sym::normalize(sym::parse_expr(fields["factor"]));
    row.omega = sym::normalize(sym::parse_expr(fields["omega"]));
    row.h = sym::normalize(
        sym::substitute(sym::parse_expr(fields["h"]), {{kOmega, row.omega}}));
    row.reduced = sym::parse_expr(fields["reduced"]);
    auto mentions_a = [&](const Expr& e) {
      return sym::variables(e).count(kA) != 0;
    };
    row.has_param = mentions_a(row.h) || mentions_a(row.omega) ||
                    mentions_a(row.reduced);
    rows.push_back(std::move(row));
  }
  if (rows.size() != 9)
    throw std::runtime_error(path + ": expected nine rows, found " +
                             std::to_string(rows.size()));
  return rows;
}

}  // namespace

const std::vector<AnsatzRow>& table1() {
  static const std::vector<AnsatzRow> rows =
      load_rows(alg::data_dir() + "/reductions/table1.red");
  return rows;
}

AnsatzRow table1_row(const std::string& id, std::optional<Expr> a,
                     bool negative_z1) {
  for (const AnsatzRow& r : table1()) {
    if (r.id != id) continue;
    AnsatzRow row = r;
    if (negative_z1) {
      row.h = sym::normalize(flip_ln_z1(row.h));
      row.omega = sym::normalize(flip_ln_z1(row.omega));
      row.reduced = flip_ln_z1(row.reduced);
      if (row.factor) row.factor = sym::normalize(flip_ln_z1(*row.factor));
      row.negative_z1 = true;
    }
    if (a) {
      if (!row.has_param)
        throw std::invalid_argument("row " + id + " has no parameter");
      std::map<VarId, Expr> b{{kA, *a}};
      row.h = sym::normalize(sym::substitute(row.h, b));
      row.omega = sym::normalize(sym::substitute(row.omega, b));
      row.reduced = sym::substitute(row.reduced, b);
      if (row.factor) row.factor = sym::normalize(sym::substitute(*row.factor, b));
      row.a = *a;
    }
    return row;
  }
  throw std::invalid_argument("unknown reduction row '" + id + "'");
}

SubalgebraSpec subalgebra(const std::string& id, std::optional<Expr> arg) {
  const AnsatzRow row = table1_row(id);
  SubalgebraSpec spec;
  spec.id = id;
  spec.burgers_gen = alg::parse_combo(alg::catalog("a13check"), row.gen);
  spec.lifted_gen = alg::parse_combo(alg::catalog("a13"), row.lift);
  if (id == "1.0") {
    if (arg) {
      for (const VarId& v : sym::variables(*arg))
        if (!(v == kZ1))
          throw std::invalid_argument(
              "row 1.0 takes a function of z1 as its parameter");
      for (auto& [v, e] : spec.lifted_gen.comp)
        e = sym::normalize(sym::substitute_opaque(e, "alpha", kZ1, *arg));
    }
    return spec;
  }
  if (!arg) return spec;
  if (!row.has_param)
    throw std::invalid_argument("row " + id + " has no parameter");
  if (arg->is_num()) {
    const Q& v = arg->value();
    if (id == "1.6" && v < Q(1, 2))
      throw std::invalid_argument("row 1.6 requires a >= 1/2");
    if (id == "1.8" && v < 0)
      throw std::invalid_argument("row 1.8 requires a >= 0");
  }
  std::map<VarId, Expr> b{{kA, *arg}};
  for (auto& f : {&spec.burgers_gen, &spec.lifted_gen})
    for (auto& [v, e] : f->comp) e = sym::normalize(sym::substitute(e, b));
  return spec;
}

Expr symbolic_reduce(const AnsatzRow& row) {
  const jet::EquationModel& m = jet::model("burgers");
  std::map<VarId, Expr> jets;
  for (const VarId& v : sym::variables(m.L)) {
    if (v.kind != VarId::Kind::Jet) continue;
    Expr d = row.h;
    for (int k = 0; k < v.index[0]; ++k) d = sym::diff(d, kZ1);
    for (int l = 0; l < v.index[1]; ++l) d = sym::diff(d, kZ2);
    jets[v] = d;
  }
  Expr substituted = sym::normalize(sym::substitute(m.L, jets));
  Expr inst = sym::substitute(row.reduced, {{kOmega, row.omega}});
  Expr factor;
  if (row.factor) {
    factor = *row.factor;
    Expr diff = sym::normalize(substituted - factor * inst);
    if (!sym::normalize(fold_explog(diff)).is_zero_const())
      throw std::runtime_error("row " + row.id +
                               ": substituted equation does not match the "
                               "table multiplier");
  } else {
    factor = sym::normalize(substituted * sym::pow(inst, Q(-1)));
    if (has_opq(factor, "phi"))
      throw std::runtime_error("row " + row.id +
                               ": quotient by the reduced residual is not "
                               "clean: " + sym::print(factor));
    if (!sym::equal_normalized(substituted, factor * inst))
      throw std::runtime_error("row " + row.id +
                               ": substituted equation does not factor");
  }
  if (sym::is_zero(factor) != sym::Verdict::Nonzero)
    throw std::runtime_error("row " + row.id + ": factor vanishes");
  return factor;
}

alg::Report invariance_check(const AnsatzRow& row) {
  const jet::EquationModel& m = jet::model("burgers");
  VectorField x = alg::parse_combo(alg::catalog("a13check"), row.gen);
  if (row.a)
    for (auto& [v, e] : x.comp)
      e = sym::normalize(sym::substitute(e, {{kA, *row.a}}));
  VectorField pr = jet::prolong(x, 1, m);
  alg::Report rep;
  auto verdict_check = [&](const std::string& what, const Expr& e) {
    sym::Verdict v = sym::is_zero(sym::normalize(e));
    rep.push_back({row.id + ": " + what, v != sym::Verdict::Nonzero,
                   std::string(sym::to_string(v))});
  };
  verdict_check("invariant annihilated", pr.apply(row.omega));
  Expr gamma = pr.apply(sym::evar(jet::dep0(m)) - row.h);
  verdict_check("ansatz surface invariant",
                sym::substitute(gamma, {{jet::dep0(m), row.h}}));
  return rep;
}

}  // namespace nyz::red
