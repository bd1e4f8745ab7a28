#include "nyz/liealgebra.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nyz::alg {

namespace {

std::string& dir_storage() {
  static std::string dir = [] {
    if (const char* env = std::getenv("NYZ_DATA_DIR")) return std::string(env);
    return std::string("data");
  }();
  return dir;
}

std::map<std::string, AlgebraCatalog>& cache() {
  static std::map<std::string, AlgebraCatalog> c;
  return c;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_ident(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

struct LineFail {
  const std::string& path;
  int line;
  [[noreturn]] void operator()(const std::string& msg) const {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
  }
};

VarId coord_id(const std::string& tok, const LineFail& fail) {
  Expr e;
  try {
    e = sym::parse_expr(tok);
  } catch (const std::exception& ex) {
    fail("bad coordinate '" + tok + "': " + ex.what());
  }
  if (e.kind() != Expr::Kind::Var) fail("'" + tok + "' is not a coordinate");
  return e.var();
}

// NAME or NAME[formal]
TableRef parse_ref(const std::string& tok, const LineFail& fail) {
  TableRef ref;
  size_t lb = tok.find('[');
  if (lb == std::string::npos) {
    ref.gen = tok;
  } else {
    if (tok.back() != ']') fail("malformed operand '" + tok + "'");
    ref.gen = tok.substr(0, lb);
    ref.formal = tok.substr(lb + 1, tok.size() - lb - 2);
    if (!is_ident(ref.formal)) fail("bad slot symbol in '" + tok + "'");
  }
  if (!is_ident(ref.gen)) fail("bad generator name in '" + tok + "'");
  return ref;
}

// Signed top-level terms of a right-hand side, honouring [] and () nesting.
std::vector<std::pair<int, std::string>> split_terms(const std::string& rhs,
                                                     const LineFail& fail) {
  std::vector<std::pair<int, std::string>> out;
  int depth = 0, sign = 1;
  std::string cur;
  auto flush = [&](int next_sign) {
    std::string t = trim(cur);
    if (t.empty()) fail("empty term in right-hand side");
    out.push_back({sign, t});
    sign = next_sign;
    cur.clear();
  };
  for (size_t i = 0; i < rhs.size(); ++i) {
    char c = rhs[i];
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (depth == 0 && (c == '+' || c == '-') && !trim(cur).empty()) {
      flush(c == '-' ? -1 : 1);
      continue;
    }
    if (depth == 0 && c == '-' && trim(cur).empty()) {
      sign = -sign;
      continue;
    }
    cur += c;
  }
  if (depth != 0) fail("unbalanced brackets in right-hand side");
  flush(1);
  return out;
}

struct RawTerm {
  std::string name;
  std::string coeff;  // "1" when absent
  std::string arg;    // empty when absent
};

RawTerm split_term(const std::string& term, const LineFail& fail) {
  RawTerm raw;
  std::string head = term;
  int depth = 0;
  for (size_t i = 0; i < term.size(); ++i) {
    char c = term[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == '[' && depth == 0) {
      if (term.back() != ']') fail("malformed term '" + term + "'");
      head = trim(term.substr(0, i));
      raw.arg = term.substr(i + 1, term.size() - i - 2);
      break;
    }
  }
  size_t star = head.rfind('*');
  raw.coeff = "1";
  raw.name = head;
  if (star != std::string::npos) {
    raw.coeff = trim(head.substr(0, star));
    raw.name = trim(head.substr(star + 1));
  }
  if (!is_ident(raw.name)) fail("bad generator name in term '" + term + "'");
  return raw;
}

TableTerm parse_term(int sign, const std::string& term, const LineFail& fail) {
  TableTerm t;
  RawTerm raw = split_term(term, fail);
  Expr c = sym::normalize(sym::parse_expr(raw.coeff));
  if (!c.is_num()) fail("coefficient '" + raw.coeff + "' is not rational");
  t.coeff = c.value() * sign;
  t.gen = raw.name;
  if (!raw.arg.empty()) t.arg = sym::parse_expr(raw.arg);
  return t;
}

void validate(AlgebraCatalog& cat, const std::string& path) {
  LineFail fail{path, 0};
  if (cat.id.empty()) fail("missing 'catalog' header");
  if (cat.space.empty()) fail("missing 'space' line");
  const jet::EquationModel& m = jet::model(cat.space);
  std::vector<VarId> base = jet::base_coords(m);
  for (const CatalogGenerator& g : cat.gens) {
    for (const auto& [v, e] : g.field.comp)
      if (std::find(base.begin(), base.end(), v) == base.end())
        fail("generator " + g.name + ": '" + v.str() +
             "' is not a base coordinate of " + cat.space);
  }
  auto gen_of = [&](const TableRef& r) -> const CatalogGenerator& {
    return cat.gen(r.gen);
  };
  std::map<std::pair<std::string, std::string>, int> seen;
  for (const TableRow& row : cat.table) {
    for (const TableRef* r : {&row.a, &row.b}) {
      const CatalogGenerator& g = gen_of(*r);
      if (g.slot.empty() != r->formal.empty())
        fail("operand " + r->gen + ": slot symbol " +
             (g.slot.empty() ? "given for a fixed generator"
                             : "missing for a slotted family"));
    }
    for (const TableTerm& t : row.rhs) {
      const CatalogGenerator& g = cat.gen(t.gen);
      if (g.slot.empty() != !t.arg.has_value())
        fail("term " + t.gen + ": slot argument mismatch");
    }
    auto key = std::minmax(row.a.gen, row.b.gen);
    if (++seen[{key.first, key.second}] > 1)
      fail("duplicate table row for pair (" + row.a.gen + ", " + row.b.gen + ")");
  }
}

std::string ref_str(const TableRef& r) {
  return r.formal.empty() ? r.gen : r.gen + "[" + r.formal + "]";
}

Q coeff_or_zero(const std::map<std::string, Q>& m, const std::string& k) {
  auto it = m.find(k);
  return it == m.end() ? Q(0) : it->second;
}

Expr slot_or_zero(const std::map<std::string, Expr>& m, const std::string& k) {
  auto it = m.find(k);
  return it == m.end() ? sym::num(0) : it->second;
}

// "" when equal, else a description of the first mismatch.
std::string diff_decomp(const Decomposition& got, const Decomposition& want) {
  std::set<std::string> keys;
  for (const auto& [k, v] : got.consts) keys.insert(k);
  for (const auto& [k, v] : want.consts) keys.insert(k);
  for (const std::string& k : keys) {
    Q g = coeff_or_zero(got.consts, k), w = coeff_or_zero(want.consts, k);
    if (g != w)
      return "coefficient of " + k + ": got " + sym::to_string(g) +
             ", expected " + sym::to_string(w);
  }
  keys.clear();
  for (const auto& [k, v] : got.slots) keys.insert(k);
  for (const auto& [k, v] : want.slots) keys.insert(k);
  for (const std::string& k : keys) {
    Expr g = slot_or_zero(got.slots, k), w = slot_or_zero(want.slots, k);
    if (!sym::equal_normalized(g, w))
      return "slot argument of " + k + ": got " + sym::print(sym::normalize(g)) +
             ", expected " + sym::print(sym::normalize(w));
  }
  return "";
}

}  // namespace

const CatalogGenerator& AlgebraCatalog::gen(const std::string& name) const {
  for (const CatalogGenerator& g : gens)
    if (g.name == name) return g;
  throw std::invalid_argument("catalog " + id + ": no generator '" + name + "'");
}

VectorField AlgebraCatalog::instantiate(const std::string& name,
                                        const std::string& formal) const {
  const CatalogGenerator& g = gen(name);
  if (g.slot.empty()) {
    if (!formal.empty())
      throw std::invalid_argument("generator " + name + " has no slot");
    return g.field;
  }
  if (formal.empty())
    throw std::invalid_argument("generator " + name + " needs a slot symbol");
  if (formal == g.slot) return g.field;
  return instantiate(name, sym::opq(formal, 0, sym::evar(slot_var)));
}

VectorField AlgebraCatalog::instantiate(const std::string& name,
                                        const Expr& arg) const {
  const CatalogGenerator& g = gen(name);
  if (g.slot.empty())
    throw std::invalid_argument("generator " + name + " has no slot");
  VectorField out;
  out.space = g.field.space;
  for (const auto& [v, e] : g.field.comp) {
    Expr c = sym::normalize(sym::substitute_opaque(e, g.slot, slot_var, arg));
    if (!c.is_zero_const()) out.comp[v] = c;
  }
  return out;
}

void set_data_dir(std::string dir) {
  dir_storage() = std::move(dir);
  cache().clear();
}

const std::string& data_dir() { return dir_storage(); }

AlgebraCatalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog resource " + path);
  AlgebraCatalog cat;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    LineFail fail{path, lineno};
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream is(s);
    std::string kw;
    is >> kw;
    if (kw == "catalog") {
      std::string ver;
      is >> cat.id >> ver >> cat.version;
      if (ver != "version" || cat.version < 1 || !is) fail("bad catalog header");
    } else if (kw == "space") {
      is >> cat.space;
    } else if (kw == "slotvar") {
      std::string v;
      is >> v;
      cat.slot_var = coord_id(v, fail);
    } else if (kw == "gen") {
      std::vector<std::string> fields;
      std::string rest;
      std::getline(is, rest);
      size_t pos = 0;
      while (true) {
        size_t bar = rest.find('|', pos);
        fields.push_back(trim(rest.substr(pos, bar - pos)));
        if (bar == std::string::npos) break;
        pos = bar + 1;
      }
      CatalogGenerator g;
      std::istringstream head(fields[0]);
      std::string slot_kw;
      head >> g.name >> slot_kw >> g.slot;
      if (!is_ident(g.name)) fail("bad generator name");
      if (!slot_kw.empty() && (slot_kw != "slot" || !is_ident(g.slot)))
        fail("bad slot declaration");
      g.field.space = cat.space;
      for (size_t i = 1; i < fields.size(); ++i) {
        size_t colon = fields[i].find(':');
        if (colon == std::string::npos) fail("expected 'coord: expr'");
        VarId v = coord_id(trim(fields[i].substr(0, colon)), fail);
        Expr e;
        try {
          e = sym::parse_expr(fields[i].substr(colon + 1));
        } catch (const std::exception& ex) {
          fail(std::string("bad coefficient: ") + ex.what());
        }
        g.field.comp[v] = e;
      }
      for (const CatalogGenerator& prev : cat.gens)
        if (prev.name == g.name) fail("duplicate generator " + g.name);
      cat.gens.push_back(std::move(g));
    } else if (kw == "table") {
      std::string rest;
      std::getline(is, rest);
      size_t eq = rest.find('=');
      if (eq == std::string::npos) fail("missing '=' in table row");
      std::istringstream lhs(rest.substr(0, eq));
      std::string ta, tb;
      lhs >> ta >> tb;
      if (ta.empty() || tb.empty()) fail("expected two operands");
      TableRow row;
      row.a = parse_ref(ta, fail);
      row.b = parse_ref(tb, fail);
      std::string rhs = trim(rest.substr(eq + 1));
      if (rhs != "0")
        for (auto& [sign, term] : split_terms(rhs, fail))
          row.rhs.push_back(parse_term(sign, term, fail));
      cat.table.push_back(std::move(row));
    } else {
      fail("unknown keyword '" + kw + "'");
    }
  }
  validate(cat, path);
  return cat;
}

const AlgebraCatalog& catalog(const std::string& id) {
  auto it = cache().find(id);
  if (it != cache().end()) return it->second;
  AlgebraCatalog cat = load_catalog(data_dir() + "/algebras/" + id + ".alg");
  if (cat.id != id)
    throw std::runtime_error("catalog resource for '" + id +
                             "' declares id '" + cat.id + "'");
  return cache().emplace(id, std::move(cat)).first->second;
}

VectorField realize(const Decomposition& d, const AlgebraCatalog& cat) {
  VectorField out;
  out.space = cat.space;
  std::map<VarId, Expr> acc;
  auto add_field = [&](const VectorField& f, const Q& c) {
    for (const auto& [v, e] : f.comp) {
      Expr t = sym::num(c) * e;
      auto it = acc.find(v);
      acc[v] = it == acc.end() ? t : it->second + t;
    }
  };
  for (const auto& [name, c] : d.consts) add_field(cat.gen(name).field, c);
  for (const auto& [name, arg] : d.slots) add_field(cat.instantiate(name, arg), Q(1));
  for (const auto& [v, e] : acc) {
    Expr n = sym::normalize(e);
    if (!n.is_zero_const()) out.comp[v] = n;
  }
  return out;
}

VectorField parse_combo(const AlgebraCatalog& cat, const std::string& text) {
  LineFail fail{"<combo>", 0};
  VectorField out;
  out.space = cat.space;
  std::map<VarId, Expr> acc;
  for (const auto& [sign, term] : split_terms(text, fail)) {
    RawTerm raw = split_term(term, fail);
    const CatalogGenerator& g = cat.gen(raw.name);
    VectorField f;
    if (!raw.arg.empty()) {
      f = cat.instantiate(raw.name, sym::parse_expr(raw.arg));
    } else if (g.slot.empty()) {
      f = g.field;
    } else {
      throw std::invalid_argument("parse_combo: generator family '" +
                                  raw.name + "' needs a bracketed argument");
    }
    Expr c = sym::num(sign) * sym::parse_expr(raw.coeff);
    for (const auto& [v, e] : f.comp) {
      Expr t = c * e;
      auto it = acc.find(v);
      acc[v] = it == acc.end() ? t : it->second + t;
    }
  }
  for (const auto& [v, e] : acc) {
    Expr n = sym::normalize(e);
    if (!n.is_zero_const()) out.comp[v] = n;
  }
  return out;
}

bool all_pass(const Report& r) {
  return std::all_of(r.begin(), r.end(),
                     [](const CheckResult& c) { return c.pass; });
}

Report verify_commutation_table(const AlgebraCatalog& cat) {
  std::map<std::pair<std::string, std::string>, const TableRow*> rows;
  for (const TableRow& r : cat.table) {
    auto key = std::minmax(r.a.gen, r.b.gen);
    rows[{key.first, key.second}] = &r;
  }
  Report rep;
  const size_t n = cat.gens.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      const CatalogGenerator& gi = cat.gens[i];
      const CatalogGenerator& gj = cat.gens[j];
      if (i == j && gi.slot.empty()) continue;  // [X, X] carries no content
      auto key = std::minmax(gi.name, gj.name);
      auto it = rows.find({key.first, key.second});
      CheckResult res;
      if (it != rows.end()) {
        const TableRow& row = *it->second;
        res.id = cat.id + ": [" + ref_str(row.a) + ", " + ref_str(row.b) + "]";
        VectorField br = lie_bracket(cat.instantiate(row.a.gen, row.a.formal),
                                     cat.instantiate(row.b.gen, row.b.formal));
        auto got = match_to_basis(br, cat);
        if (!got) {
          res.detail = "bracket does not decompose in the catalog basis";
        } else {
          Decomposition want;
          for (const TableTerm& t : row.rhs) {
            if (t.arg) {
              Expr add = sym::num(t.coeff) * *t.arg;
              auto sit = want.slots.find(t.gen);
              want.slots[t.gen] =
                  sit == want.slots.end() ? add : sit->second + add;
            } else {
              want.consts[t.gen] += t.coeff;
            }
          }
          for (auto wit = want.consts.begin(); wit != want.consts.end();)
            wit = wit->second == 0 ? want.consts.erase(wit) : std::next(wit);
          res.detail = diff_decomp(*got, want);
        }
      } else {
        // Pairs without a row commute.
        std::string fa = gi.slot, fb = gj.slot;
        if (!fa.empty() && fa == fb) {
          fa += "1";
          fb += "2";
        }
        res.id = cat.id + ": [" + ref_str({gi.name, fa}) + ", " +
                 ref_str({gj.name, fb}) + "]";
        VectorField br = lie_bracket(cat.instantiate(gi.name, fa),
                                     cat.instantiate(gj.name, fb));
        if (!br.comp.empty())
          res.detail = "expected zero bracket, got " + br.comp.begin()->first.str() +
                       "-component " + sym::print(br.comp.begin()->second);
      }
      res.pass = res.detail.empty();
      rep.push_back(std::move(res));
    }
  }
  return rep;
}

}  // namespace nyz::alg
