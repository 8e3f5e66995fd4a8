#include "bvpair/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "bvpair/error.hpp"
#include "toml.hpp"

namespace bvpair {

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"coarea",   "coarea_negative", "gauss_green", "lsc_L",
                                              "lsc_V",    "lsc_converse",    "misc",        "recovery",
                                              "relaxation", "representation", "slicing"};
  return names;
}

const CheckSpec* Scenario::check(const std::string& n) const {
  for (const CheckSpec& c : checks)
    if (c.name == n) return &c;
  return nullptr;
}

const TestFunction& Scenario::phi_named(const std::string& n) const {
  for (std::size_t i = 0; i < phi_specs.size(); ++i)
    if (phi_specs[i].name == n) return phi.at(i);
  throw Error(ErrorCode::ValidationError, "no test function named '" + n + "'");
}

namespace {

class Reader {
 public:
  Reader(std::string source, bool strict, std::vector<std::string>* warnings)
      : source_(std::move(source)), strict_(strict), warnings_(warnings) {}

  [[noreturn]] void fail(const toml::node* n, ErrorCode code, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (n && n->source().begin.line > 0) os << ":" << n->source().begin.line << ":" << n->source().begin.column;
    os << ": " << msg;
    throw Error(code, os.str());
  }

  void keys(const toml::table& t, const std::string& where, std::initializer_list<std::string_view> allowed) const {
    for (auto&& [k, v] : t) {
      if (std::find(allowed.begin(), allowed.end(), k.str()) != allowed.end()) continue;
      const std::string msg = "unknown key '" + std::string(k.str()) + "' in " + where;
      if (strict_) fail(&v, ErrorCode::ValidationError, msg);
      warnings_->push_back(msg);
    }
  }

  const toml::table& table(const toml::node* n, const std::string& what) const {
    if (!n || !n->is_table()) fail(n, ErrorCode::ValidationError, what + " must be a table");
    return *n->as_table();
  }

  const toml::array& array(const toml::node* n, const std::string& what) const {
    if (!n || !n->is_array()) fail(n, ErrorCode::ValidationError, what + " must be an array");
    return *n->as_array();
  }

  Expr expr(const toml::node* n, const std::string& what) const {
    if (!n) fail(n, ErrorCode::ValidationError, "missing " + what);
    if (n->is_number()) return ex::constant(n->value<double>().value());
    if (!n->is_string()) fail(n, ErrorCode::ValidationError, what + " must be an expression string");
    try {
      return parse_expr(n->value<std::string>().value());
    } catch (const Error& e) {
      fail(n, ErrorCode::ParseError, what + ": " + e.what());
    }
  }

  double number(const toml::node* n, const std::string& what) const {
    if (!n) fail(n, ErrorCode::ValidationError, "missing " + what);
    if (n->is_number()) return n->value<double>().value();
    const Expr e = expr(n, what);
    if (depends_on_var(e)) fail(n, ErrorCode::ValidationError, what + " must be a constant expression");
    return eval(e, 0.0);
  }

  std::string string(const toml::node* n, const std::string& what) const {
    if (!n || !n->is_string()) fail(n, ErrorCode::ValidationError, what + " must be a string");
    return n->value<std::string>().value();
  }

  BVSpec bv(const toml::table& t, double lo, double hi, const std::string& where) const {
    keys(t, where, {"ac", "jumps", "cantor", "base_point", "base_value", "monotone_breaks"});
    BVSpec s;
    s.lo = lo;
    s.hi = hi;
    if (const toml::node* ac = t.get("ac")) {
      if (ac->is_string() || ac->is_number()) {
        s.ac = Piecewise({lo, hi}, {expr(ac, where + ".ac")});
      } else {
        const toml::array& arr = array(ac, where + ".ac");
        std::vector<std::tuple<double, double, Expr, const toml::node*>> segs;
        for (const toml::node& e : arr) {
          const toml::table& seg = table(&e, where + ".ac segment");
          keys(seg, where + ".ac segment", {"from", "to", "expr"});
          segs.emplace_back(number(seg.get("from"), "from"), number(seg.get("to"), "to"),
                            expr(seg.get("expr"), where + ".ac expr"), &e);
        }
        std::sort(segs.begin(), segs.end(),
                  [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
        if (segs.empty()) fail(ac, ErrorCode::ValidationError, where + ".ac has no segments");
        std::vector<double> breaks{std::get<0>(segs.front())};
        std::vector<Expr> pieces;
        for (std::size_t i = 0; i < segs.size(); ++i) {
          const auto& [from, to, e, node] = segs[i];
          if (std::abs(from - breaks.back()) > 1e-14 * std::max(1.0, std::abs(from)))
            fail(node, ErrorCode::ValidationError, where + ".ac segments must be contiguous");
          if (!(to > from)) fail(node, ErrorCode::ValidationError, where + ".ac segment with to <= from");
          breaks.push_back(to);
          pieces.push_back(e);
        }
        if (std::abs(breaks.front() - lo) > 1e-14 * std::max(1.0, std::abs(lo)) ||
            std::abs(breaks.back() - hi) > 1e-14 * std::max(1.0, std::abs(hi)))
          fail(ac, ErrorCode::ValidationError, where + ".ac segments must cover the domain");
        breaks.front() = lo;
        breaks.back() = hi;
        s.ac = Piecewise(breaks, pieces);
      }
    }
    if (const toml::node* js = t.get("jumps")) {
      for (const toml::node& e : array(js, where + ".jumps")) {
        const toml::table& j = table(&e, where + ".jumps entry");
        keys(j, where + ".jumps entry", {"x", "size"});
        s.jumps.push_back({number(j.get("x"), "jump x"), number(j.get("size"), "jump size")});
      }
    }
    if (const toml::node* cs = t.get("cantor")) {
      for (const toml::node& e : array(cs, where + ".cantor")) {
        const toml::table& c = table(&e, where + ".cantor entry");
        keys(c, where + ".cantor entry", {"weight", "lo", "hi"});
        CantorComponent k;
        k.weight = number(c.get("weight"), "cantor weight");
        k.lo = number(c.get("lo"), "cantor lo");
        k.hi = number(c.get("hi"), "cantor hi");
        if (!(k.lo < k.hi)) fail(&e, ErrorCode::ValidationError, "Cantor support needs lo < hi");
        s.cantor.push_back(k);
      }
    }
    if (const toml::node* n = t.get("base_point")) s.base_point = number(n, "base_point");
    if (const toml::node* n = t.get("base_value")) s.base_value = number(n, "base_value");
    if (const toml::node* mb = t.get("monotone_breaks"))
      for (const toml::node& e : array(mb, where + ".monotone_breaks")) s.monotone_breaks.push_back(number(&e, "break"));
    return s;
  }

 private:
  std::string source_;
  bool strict_;
  std::vector<std::string>* warnings_;
};

nlohmann::json to_json(const toml::node& n) {
  if (n.is_table()) {
    nlohmann::json j = nlohmann::json::object();
    for (auto&& [k, v] : *n.as_table()) j[std::string(k.str())] = to_json(v);
    return j;
  }
  if (n.is_array()) {
    nlohmann::json j = nlohmann::json::array();
    for (const toml::node& v : *n.as_array()) j.push_back(to_json(v));
    return j;
  }
  if (n.is_integer()) return n.value<std::int64_t>().value();
  if (n.is_floating_point()) return n.value<double>().value();
  if (n.is_boolean()) return n.value<bool>().value();
  if (n.is_string()) return n.value<std::string>().value();
  return nullptr;
}

SelectionSpec selection(const Reader& r, const toml::node& n) {
  if (n.is_string()) {
    const std::string s = n.value<std::string>().value();
    if (s == "maxF") return SelectionSpec::max_f();
    if (s == "minZeta") return SelectionSpec::min_zeta();
    r.fail(&n, ErrorCode::ValidationError, "unknown selection '" + s + "'");
  }
  const toml::table& t = r.table(&n, "selection");
  const std::string kind = r.string(t.get("kind"), "selection kind");
  if (kind == "const") {
    r.keys(t, "selection", {"kind", "value"});
    return SelectionSpec::constant(r.number(t.get("value"), "selection value"));
  }
  if (kind == "match") {
    r.keys(t, "selection", {"kind", "Lambda"});
    return SelectionSpec::match(r.number(t.get("Lambda"), "selection Lambda"));
  }
  if (kind == "explicit") {
    r.keys(t, "selection", {"kind", "values"});
    std::vector<double> v;
    for (const toml::node& e : r.array(t.get("values"), "selection values")) v.push_back(r.number(&e, "value"));
    return SelectionSpec::explicit_values(v);
  }
  if (kind == "maxF") return SelectionSpec::max_f();
  if (kind == "minZeta") return SelectionSpec::min_zeta();
  r.fail(&n, ErrorCode::ValidationError, "unknown selection kind '" + kind + "'");
}

Scenario parse_table(const toml::table& root, const std::string& source, bool strict) {
  Scenario sc;
  Reader r(source, strict, &sc.warnings);
  r.keys(root, "scenario", {"name", "description", "seed", "domain", "field", "u", "selections", "phi", "sets",
                            "checks", "output", "quadrature"});
  sc.name = r.string(root.get("name"), "name");
  if (const toml::node* d = root.get("description")) sc.description = r.string(d, "description");
  if (const toml::node* s = root.get("seed")) {
    if (!s->is_integer() || s->value<std::int64_t>().value() < 0)
      r.fail(s, ErrorCode::ValidationError, "seed must be a nonnegative integer");
    sc.seed = static_cast<std::uint64_t>(s->value<std::int64_t>().value());
  }
  const toml::table& dom = r.table(root.get("domain"), "[domain]");
  r.keys(dom, "[domain]", {"lo", "hi"});
  sc.lo = r.number(dom.get("lo"), "domain lo");
  sc.hi = r.number(dom.get("hi"), "domain hi");
  if (!(sc.lo < sc.hi)) r.fail(&dom, ErrorCode::ValidationError, "domain needs lo < hi");

  const toml::table& f = r.table(root.get("field"), "[field]");
  r.keys(f, "[field]", {"kind", "T", "autonomous", "terms"});
  try {
    sc.field_spec.kind = field_kind_from_string(r.string(f.get("kind"), "field kind"));
  } catch (const Error& e) {
    r.fail(f.get("kind"), ErrorCode::ValidationError, e.what());
  }
  sc.field_spec.T = r.number(f.get("T"), "field T");
  if (const toml::node* a = f.get("autonomous")) {
    const toml::table& at = r.table(a, "field.autonomous");
    r.keys(at, "field.autonomous", {"b", "B"});
    sc.field_spec.b0 = r.expr(at.get("b"), "field.autonomous.b");
    if (at.get("B")) sc.field_spec.B0 = r.expr(at.get("B"), "field.autonomous.B");
  }
  if (const toml::node* ts = f.get("terms")) {
    for (const toml::node& e : r.array(ts, "field.terms")) {
      const toml::table& t = r.table(&e, "field.terms entry");
      r.keys(t, "[[field.terms]]", {"g", "G", "A"});
      TermSpec term;
      term.g = r.expr(t.get("g"), "field term g");
      if (t.get("G")) term.G = r.expr(t.get("G"), "field term G");
      term.A = r.bv(r.table(t.get("A"), "field term A"), sc.lo, sc.hi, "field.terms.A");
      sc.field_spec.terms.push_back(std::move(term));
    }
  }
  sc.u_spec = r.bv(r.table(root.get("u"), "[u]"), sc.lo, sc.hi, "[u]");

  if (const toml::node* s = root.get("selections"))
    for (auto&& [k, v] : r.table(s, "[selections]")) sc.selections.emplace_back(std::string(k.str()), selection(r, v));

  if (const toml::node* ps = root.get("phi")) {
    for (const toml::node& e : r.array(ps, "[[phi]]")) {
      const toml::table& t = r.table(&e, "[[phi]] entry");
      r.keys(t, "[[phi]]", {"name", "center", "radius", "amplitude"});
      PhiSpec p;
      p.name = r.string(t.get("name"), "phi name");
      p.center = r.number(t.get("center"), "phi center");
      p.radius = r.number(t.get("radius"), "phi radius");
      if (t.get("amplitude")) p.amplitude = r.number(t.get("amplitude"), "phi amplitude");
      sc.phi_specs.push_back(p);
    }
  }
  if (const toml::node* ss = root.get("sets")) {
    for (const toml::node& e : r.array(ss, "[[sets]]")) {
      const toml::table& t = r.table(&e, "[[sets]] entry");
      r.keys(t, "[[sets]]", {"name", "intervals"});
      SetSpec s;
      s.name = r.string(t.get("name"), "set name");
      for (const toml::node& iv : r.array(t.get("intervals"), "set intervals")) {
        const toml::array& pair = r.array(&iv, "interval");
        if (pair.size() != 2) r.fail(&iv, ErrorCode::ValidationError, "intervals are [a, b] pairs");
        s.intervals.emplace_back(r.number(pair.get(0), "interval lo"), r.number(pair.get(1), "interval hi"));
      }
      sc.set_specs.push_back(s);
    }
  }
  if (const toml::node* cs = root.get("checks")) {
    for (auto&& [k, v] : r.table(cs, "[checks]")) {
      const std::string name(k.str());
      const auto& known = check_names();
      if (std::find(known.begin(), known.end(), name) == known.end())
        r.fail(&v, ErrorCode::ValidationError, "unknown check '" + name + "'");
      CheckSpec c;
      c.name = name;
      for (auto&& [pk, pv] : r.table(&v, "[checks." + name + "]")) {
        if (pk.str() == "tol")
          c.tol = r.number(&pv, "tol");
        else
          c.params[std::string(pk.str())] = to_json(pv);
      }
      sc.checks.push_back(std::move(c));
    }
    std::sort(sc.checks.begin(), sc.checks.end(), [](const CheckSpec& a, const CheckSpec& b) { return a.name < b.name; });
  }
  if (const toml::node* o = root.get("output")) {
    const toml::table& t = r.table(o, "[output]");
    r.keys(t, "[output]", {"report", "csv"});
    if (t.get("report")) sc.output_report = r.string(t.get("report"), "output.report");
    if (t.get("csv")) sc.output_csv = r.string(t.get("csv"), "output.csv");
  }
  if (const toml::node* q = root.get("quadrature")) {
    const toml::table& t = r.table(q, "[quadrature]");
    r.keys(t, "[quadrature]", {"abs_tol", "gap_depth", "cantor_depth", "cantor_min_depth", "leaf_depth", "plateau_depth"});
    auto integer = [&](const char* key, int lo, int hi) -> std::optional<int> {
      const toml::node* n = t.get(key);
      if (!n) return std::nullopt;
      if (!n->is_integer()) r.fail(n, ErrorCode::ValidationError, std::string(key) + " must be an integer");
      const auto v = n->value<std::int64_t>().value();
      if (v < lo || v > hi) r.fail(n, ErrorCode::ValidationError, std::string(key) + " out of range");
      return static_cast<int>(v);
    };
    if (t.get("abs_tol")) sc.quadrature.quad.abs_tol = r.number(t.get("abs_tol"), "abs_tol");
    if (auto v = integer("gap_depth", 1, 20)) sc.quadrature.quad.gap_depth = *v;
    if (auto v = integer("cantor_depth", 1, 30)) sc.quadrature.quad.cantor_depth = *v;
    if (auto v = integer("cantor_min_depth", 0, 30)) sc.quadrature.quad.cantor_min_depth = *v;
    if (auto v = integer("leaf_depth", 1, 14)) sc.quadrature.leaf_depth = *v;
    if (auto v = integer("plateau_depth", 1, 16)) sc.quadrature.plateau_depth = *v;
  }
  return sc;
}

}  // namespace

Scenario parse_scenario_string(const std::string& text, const std::string& source, bool strict) {
  toml::table root;
  try {
    root = toml::parse(std::string_view(text), std::string_view(source));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw Error(ErrorCode::ParseError, os.str());
  }
  Scenario sc = parse_table(root, source, strict);
  build_scenario(sc);
  return sc;
}

Scenario parse_scenario(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_string(ss.str(), path, strict);
}

BVSpec bv_spec_from_toml_text(const std::string& text, double lo, double hi) {
  toml::table root;
  try {
    root = toml::parse(std::string_view(text), std::string_view("<bv>"));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "<bv>:" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw Error(ErrorCode::ParseError, os.str());
  }
  std::vector<std::string> warnings;
  Reader r("<bv>", true, &warnings);
  return r.bv(root, lo, hi, "bv");
}

void build_scenario(Scenario& sc) {
  const FieldSpec& fs = sc.field_spec;
  std::vector<TensorTerm> terms;
  for (const TermSpec& t : fs.terms)
    terms.push_back(Field::make_term(t.g, t.G, std::make_shared<const BVFunction>(t.A), fs.T));
  std::optional<AutonomousTerm> autonomous;
  if (fs.b0) autonomous = Field::make_autonomous(*fs.b0, fs.B0, fs.T);
  sc.field = std::make_shared<const Field>(sc.lo, sc.hi, fs.kind, std::move(terms), std::move(autonomous), fs.T);
  sc.u = std::make_shared<const BVFunction>(sc.u_spec);
  if (sc.u->sup_bound() + 1.0 > fs.T * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "t-range: ||u||_inf + 1 = " << sc.u->sup_bound() + 1.0 << " exceeds field T = " << fs.T;
    throw Error(ErrorCode::TRange, os.str());
  }
  sc.phi.clear();
  std::set<std::string> names;
  for (const PhiSpec& p : sc.phi_specs) {
    if (!names.insert(p.name).second) throw Error(ErrorCode::ValidationError, "duplicate test function '" + p.name + "'");
    if (!(p.radius > 0.0) || p.center - p.radius <= sc.lo || p.center + p.radius >= sc.hi)
      throw Error(ErrorCode::ValidationError, "test function '" + p.name + "' must be compactly supported in the domain");
    sc.phi.push_back(TestFunction::bump(p.center, p.radius, p.amplitude));
  }
  sc.sets.clear();
  for (const SetSpec& s : sc.set_specs) {
    FinitePerimeterSet e(s.intervals);
    if (!e.compact_in(sc.lo, sc.hi))
      throw Error(ErrorCode::ValidationError, "set '" + s.name + "' must be compactly contained in the domain");
    sc.sets.push_back(std::move(e));
  }
  sc.ctx = std::make_shared<const PairingContext>(sc.field, sc.u, sc.quadrature.quad, sc.quadrature.leaf_depth);
  // Selections must resolve on this u.
  for (const auto& [name, spec] : sc.selections) {
    try {
      (void)sc.ctx->resolve(spec);
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationError, "selection '" + name + "': " + e.what());
    }
  }
}

// ------------------------------------------------------------------ writer

namespace {

std::string num(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void write_bv(std::ostream& os, const BVSpec& s) {
  if (s.ac) {
    os << "ac = [";
    for (std::size_t i = 0; i < s.ac->pieces().size(); ++i) {
      if (i) os << ", ";
      os << "{from = " << num(s.ac->breaks()[i]) << ", to = " << num(s.ac->breaks()[i + 1])
         << ", expr = " << quoted(to_string(s.ac->pieces()[i])) << "}";
    }
    os << "]\n";
  }
  if (!s.jumps.empty()) {
    os << "jumps = [";
    for (std::size_t i = 0; i < s.jumps.size(); ++i)
      os << (i ? ", " : "") << "{x = " << num(s.jumps[i].x) << ", size = " << num(s.jumps[i].size) << "}";
    os << "]\n";
  }
  if (!s.cantor.empty()) {
    os << "cantor = [";
    for (std::size_t i = 0; i < s.cantor.size(); ++i)
      os << (i ? ", " : "") << "{weight = " << num(s.cantor[i].weight) << ", lo = " << num(s.cantor[i].lo)
         << ", hi = " << num(s.cantor[i].hi) << "}";
    os << "]\n";
  }
  if (s.base_point) os << "base_point = " << num(*s.base_point) << "\n";
  if (s.base_value) os << "base_value = " << num(*s.base_value) << "\n";
  if (!s.monotone_breaks.empty()) {
    os << "monotone_breaks = [";
    for (std::size_t i = 0; i < s.monotone_breaks.size(); ++i) os << (i ? ", " : "") << num(s.monotone_breaks[i]);
    os << "]\n";
  }
}

void write_json_value(std::ostream& os, const nlohmann::json& j) {
  if (j.is_object()) {
    os << "{";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      os << (first ? "" : ", ") << quoted(it.key()) << " = ";
      write_json_value(os, it.value());
      first = false;
    }
    os << "}";
  } else if (j.is_array()) {
    os << "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) os << ", ";
      write_json_value(os, j[i]);
    }
    os << "]";
  } else if (j.is_string()) {
    os << quoted(j.get<std::string>());
  } else if (j.is_boolean()) {
    os << (j.get<bool>() ? "true" : "false");
  } else if (j.is_number_integer() || j.is_number_unsigned()) {
    os << j.dump();
  } else if (j.is_number_float()) {
    os << num(j.get<double>());
  }
}

}  // namespace

std::string to_toml(const Scenario& sc) {
  std::ostringstream os;
  os << "name = " << quoted(sc.name) << "\n";
  if (!sc.description.empty()) os << "description = " << quoted(sc.description) << "\n";
  os << "seed = " << sc.seed << "\n\n";
  os << "[domain]\nlo = " << num(sc.lo) << "\nhi = " << num(sc.hi) << "\n\n";
  const QuadSpec& q = sc.quadrature;
  os << "[quadrature]\nabs_tol = " << num(q.quad.abs_tol) << "\ngap_depth = " << q.quad.gap_depth
     << "\ncantor_depth = " << q.quad.cantor_depth << "\ncantor_min_depth = " << q.quad.cantor_min_depth
     << "\nleaf_depth = " << q.leaf_depth << "\nplateau_depth = " << q.plateau_depth << "\n\n";
  const FieldSpec& f = sc.field_spec;
  os << "[field]\nkind = " << quoted(to_string(f.kind)) << "\nT = " << num(f.T) << "\n";
  if (f.b0) {
    os << "autonomous = {b = " << quoted(to_string(*f.b0));
    if (f.B0) os << ", B = " << quoted(to_string(*f.B0));
    os << "}\n";
  }
  os << "\n";
  for (const TermSpec& t : f.terms) {
    os << "[[field.terms]]\ng = " << quoted(to_string(t.g)) << "\n";
    if (t.G) os << "G = " << quoted(to_string(*t.G)) << "\n";
    os << "\n[field.terms.A]\n";
    write_bv(os, t.A);
    os << "\n";
  }
  os << "[u]\n";
  write_bv(os, sc.u_spec);
  os << "\n";
  if (!sc.selections.empty()) {
    os << "[selections]\n";
    for (const auto& [name, s] : sc.selections) {
      os << quoted(name) << " = ";
      switch (s.kind) {
        case SelectionKind::Const: os << "{kind = \"const\", value = " << num(s.value) << "}"; break;
        case SelectionKind::MaxF: os << "\"maxF\""; break;
        case SelectionKind::MinZeta: os << "\"minZeta\""; break;
        case SelectionKind::MatchExternal: os << "{kind = \"match\", Lambda = " << num(s.value) << "}"; break;
        case SelectionKind::Explicit:
          os << "{kind = \"explicit\", values = [";
          for (std::size_t i = 0; i < s.values.size(); ++i) os << (i ? ", " : "") << num(s.values[i]);
          os << "]}";
          break;
      }
      os << "\n";
    }
    os << "\n";
  }
  for (const PhiSpec& p : sc.phi_specs)
    os << "[[phi]]\nname = " << quoted(p.name) << "\ncenter = " << num(p.center) << "\nradius = " << num(p.radius)
       << "\namplitude = " << num(p.amplitude) << "\n\n";
  for (const SetSpec& s : sc.set_specs) {
    os << "[[sets]]\nname = " << quoted(s.name) << "\nintervals = [";
    for (std::size_t i = 0; i < s.intervals.size(); ++i)
      os << (i ? ", " : "") << "[" << num(s.intervals[i].first) << ", " << num(s.intervals[i].second) << "]";
    os << "]\n\n";
  }
  for (const CheckSpec& c : sc.checks) {
    os << "[checks." << c.name << "]\n";
    if (c.tol) os << "tol = " << num(*c.tol) << "\n";
    for (auto it = c.params.begin(); it != c.params.end(); ++it) {
      os << quoted(it.key()) << " = ";
      write_json_value(os, it.value());
      os << "\n";
    }
    os << "\n";
  }
  if (sc.output_report || sc.output_csv) {
    os << "[output]\n";
    if (sc.output_report) os << "report = " << quoted(*sc.output_report) << "\n";
    if (sc.output_csv) os << "csv = " << quoted(*sc.output_csv) << "\n";
  }
  return os.str();
}

}  // namespace bvpair
