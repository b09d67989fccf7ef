#include "cfn/instance.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cfn/among.hpp"
#include "cfn/grammar.hpp"
#include "cfn/regular.hpp"
#include "cfn/wmax.hpp"
#include "json.hpp"

namespace cfn {

namespace {

using Json = nlohmann::ordered_json;

std::size_t at(int i) { return static_cast<std::size_t>(i); }

[[noreturn]] void fail(const std::string& what) { throw InstanceError(what); }

Cost read_cost(const Json& j, const std::string& where) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfinity;
  if (j.is_number_unsigned()) return std::min(j.get<Cost>(), kInfinity);
  if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<Cost>(j.get<long long>());
  fail(where + ": expected a non-negative integer cost or \"inf\"");
}

Json write_cost(Cost c) { return c >= kInfinity ? Json("inf") : Json(c); }

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

int read_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + ": expected an integer");
  return j.get<int>();
}

std::string read_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where + ": expected a string");
  return j.get<std::string>();
}

class Reader {
 public:
  explicit Reader(Cfn& cfn) : cfn_(cfn) {}

  Scope scope(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where + ": scope must be an array of variable names");
    Scope s;
    for (const auto& name : j) {
      const VarId x = cfn_.find_variable(read_string(name, where));
      if (x < 0) fail(where + ": unknown variable " + name.dump());
      s.push_back(x);
    }
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s[i] <= s[i - 1]) fail(where + ": scope must list variables in declaration order without repeats");
    }
    return s;
  }

  int value(VarId x, const Json& j, const std::string& where) {
    const int v = cfn_.value_index(x, read_string(j, where));
    if (v < 0) fail(where + ": " + j.dump() + " is not a value of " + cfn_.variable(x).name);
    return v;
  }

  // A label that must denote the same value id for every scope variable.
  int symbol(const Scope& s, const Json& j, const std::string& where) {
    const std::string label = read_string(j, where);
    int id = -2;
    for (VarId x : s) {
      const int v = cfn_.value_index(x, label);
      if (id == -2) id = v;
      if (v != id) fail(where + ": symbol " + label + " does not denote the same value across the scope");
    }
    if (id < 0) fail(where + ": unknown symbol " + label);
    return id;
  }

 private:
  Cfn& cfn_;
};

void read_function(Cfn& cfn, const Json& j, int index) {
  const std::string where = "function " + std::to_string(index);
  Reader r(cfn);
  const std::string type = read_string(field(j, "type", where), where);
  const Scope s = r.scope(field(j, "scope", where), where);
  auto sizes = cfn.initial_sizes(s);
  if (type == "table") {
    const Cost def = j.contains("default") ? read_cost(j.at("default"), where) : 0;
    auto table = std::make_unique<TableFunction>(s, sizes, def);
    if (j.contains("tuples")) {
      for (const auto& entry : j.at("tuples")) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_array() || entry[0].size() != s.size()) {
          fail(where + ": each tuple entry is [[values...], cost]");
        }
        std::vector<int> t;
        for (std::size_t i = 0; i < s.size(); ++i) t.push_back(r.value(s[i], entry[0][i], where));
        table->set(t, read_cost(entry[1], where));
      }
    }
    cfn.add_function(std::move(table));
  } else if (type == "among") {
    std::vector<int> values;
    for (const auto& v : field(j, "values", where)) values.push_back(r.symbol(s, v, where));
    auto spec = make_among(s, values, read_int(field(j, "lb", where), where), read_int(field(j, "ub", where), where));
    cfn.add_function(std::make_unique<AmongFunction>(std::move(spec), sizes));
  } else if (type == "regular") {
    Automaton aut;
    aut.num_states = read_int(field(j, "states", where), where);
    aut.initial = read_int(field(j, "initial", where), where);
    for (const auto& q : field(j, "finals", where)) aut.finals.push_back(read_int(q, where));
    for (const auto& t : field(j, "transitions", where)) {
      if (!t.is_array() || t.size() != 3) fail(where + ": each transition is [from, symbol, to]");
      aut.transitions.push_back({read_int(t[0], where), r.symbol(s, t[1], where), read_int(t[2], where)});
    }
    check_automaton(aut);
    cfn.add_function(std::make_unique<RegularFunction>(s, sizes, std::move(aut)));
  } else if (type == "wregular") {
    const int states = read_int(field(j, "states", where), where);
    int alphabet = 1;
    for (int d : sizes) alphabet = std::max(alphabet, d);
    WeightedAutomaton aut(states, alphabet);
    const auto& start = field(j, "start", where);
    const auto& fin = field(j, "final", where);
    if (!start.is_array() || !fin.is_array() || start.size() != at(states) || fin.size() != at(states)) {
      fail(where + ": start and final list one cost per state");
    }
    for (int q = 0; q < states; ++q) {
      aut.start[at(q)] = read_cost(start[at(q)], where);
      aut.final[at(q)] = read_cost(fin[at(q)], where);
    }
    for (const auto& t : field(j, "transitions", where)) {
      if (!t.is_array() || t.size() != 4) fail(where + ": each transition is [from, symbol, to, cost]");
      const int from = read_int(t[0], where);
      const int to = read_int(t[2], where);
      if (from < 0 || from >= states || to < 0 || to >= states) fail(where + ": transition state out of range");
      aut.set_transition(from, r.symbol(s, t[1], where), to, read_cost(t[3], where));
    }
    cfn.add_function(std::make_unique<WeightedRegularFunction>(s, sizes, std::move(aut)));
  } else if (type == "grammar") {
    std::vector<std::string> names;
    for (const auto& n : field(j, "symbols", where)) names.push_back(read_string(n, where));
    auto symbol_id = [&](const Json& n) {
      const std::string name = read_string(n, where);
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<int>(i);
      }
      fail(where + ": unknown nonterminal " + name);
    };
    std::vector<Production> rules;
    for (const auto& rule : field(j, "rules", where)) {
      Production p;
      p.lhs = symbol_id(field(rule, "lhs", where));
      if (rule.contains("terminal")) {
        p.rhs.push_back({true, r.symbol(s, rule.at("terminal"), where)});
      } else {
        for (const auto& n : field(rule, "rhs", where)) p.rhs.push_back({false, symbol_id(n)});
      }
      rules.push_back(std::move(p));
    }
    const int start = symbol_id(field(j, "start", where));
    Cost mismatch = j.contains("mismatch") ? read_cost(j.at("mismatch"), where) : 1;
    if (j.contains("hard") && j.at("hard").get<bool>()) mismatch = kInfinity;
    auto g = make_cnf_grammar(static_cast<int>(names.size()), start, rules, names);
    cfn.add_function(std::make_unique<GrammarFunction>(s, sizes, std::move(g), mismatch));
  } else if (type == "wmax" || type == "wmin") {
    const auto& w = field(j, "weights", where);
    if (!w.is_array() || w.size() != s.size()) fail(where + ": weights list one row per scope variable");
    WeightMap weights;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!w[i].is_array() || w[i].size() != at(sizes[i])) fail(where + ": weight row must cover the domain");
      std::vector<Cost> row;
      for (const auto& c : w[i]) row.push_back(read_cost(c, where));
      weights.push_back(std::move(row));
    }
    cfn.add_function(std::make_unique<WMaxFunction>(s, sizes, std::move(weights), type == "wmin"));
  } else {
    fail(where + ": unknown function type " + type);
  }
}

Json scope_json(const Cfn& cfn, const Scope& s) {
  Json out = Json::array();
  for (VarId x : s) out.push_back(cfn.variable(x).name);
  return out;
}

Json function_json(const Cfn& cfn, const CostFunction& func) {
  const auto& s = func.scope();
  auto label = [&](int pos, int v) { return cfn.variable(s[at(pos)]).labels.at(at(v)); };
  Json out;
  out["type"] = func.kind();
  out["scope"] = scope_json(cfn, s);
  if (const auto* t = dynamic_cast<const TableFunction*>(&func)) {
    out["default"] = write_cost(t->default_cost());
    Json tuples = Json::array();
    for (const auto& [tuple, cost] : t->listed_tuples()) {
      Json labels = Json::array();
      for (std::size_t i = 0; i < tuple.size(); ++i) labels.push_back(label(static_cast<int>(i), tuple[i]));
      tuples.push_back(Json::array({labels, write_cost(cost)}));
    }
    out["tuples"] = tuples;
  } else if (const auto* a = dynamic_cast<const AmongFunction*>(&func)) {
    Json values = Json::array();
    for (int v : a->spec().values) values.push_back(label(0, v));
    out["values"] = values;
    out["lb"] = a->spec().lb;
    out["ub"] = a->spec().ub;
  } else if (const auto* reg = dynamic_cast<const RegularFunction*>(&func)) {
    const auto& aut = reg->automaton();
    out["states"] = aut.num_states;
    out["initial"] = aut.initial;
    out["finals"] = aut.finals;
    Json ts = Json::array();
    for (const auto& t : aut.transitions) ts.push_back(Json::array({t.from, label(0, t.symbol), t.to}));
    out["transitions"] = ts;
  } else if (const auto* wreg = dynamic_cast<const WeightedRegularFunction*>(&func)) {
    const auto& aut = wreg->automaton();
    out["states"] = aut.num_states;
    Json start = Json::array();
    Json fin = Json::array();
    for (int q = 0; q < aut.num_states; ++q) {
      start.push_back(write_cost(aut.start[at(q)]));
      fin.push_back(write_cost(aut.final[at(q)]));
    }
    out["start"] = start;
    out["final"] = fin;
    Json ts = Json::array();
    for (int q = 0; q < aut.num_states; ++q) {
      for (int w = 0; w < func.domain_sizes()[0]; ++w) {
        for (int q2 = 0; q2 < aut.num_states; ++q2) {
          const Cost c = aut.transition(q, w, q2);
          if (c < kInfinity) ts.push_back(Json::array({q, label(0, w), q2, c}));
        }
      }
    }
    out["transitions"] = ts;
  } else if (const auto* gr = dynamic_cast<const GrammarFunction*>(&func)) {
    const auto& g = gr->grammar();
    std::vector<std::string> names = g.names;
    if (names.empty()) {
      for (int i = 0; i < g.num_symbols; ++i) names.push_back("N" + std::to_string(i));
    }
    out["hard"] = gr->hard();
    if (!gr->hard()) out["mismatch"] = gr->mismatch();
    out["symbols"] = names;
    out["start"] = names[at(g.start)];
    Json rules = Json::array();
    for (const auto& t : g.terminals) rules.push_back(Json{{"lhs", names[at(t.lhs)]}, {"terminal", label(0, t.value)}});
    for (const auto& b : g.binaries) {
      rules.push_back(Json{{"lhs", names[at(b.lhs)]}, {"rhs", Json::array({names[at(b.left)], names[at(b.right)]})}});
    }
    out["rules"] = rules;
  } else if (const auto* wm = dynamic_cast<const WMaxFunction*>(&func)) {
    Json rows = Json::array();
    for (const auto& row : wm->weights()) {
      Json r = Json::array();
      for (Cost c : row) r.push_back(write_cost(c));
      rows.push_back(r);
    }
    out["weights"] = rows;
  } else {
    throw InstanceError("cannot write functions of kind " + func.kind());
  }
  return out;
}

}  // namespace

Cfn parse_instance(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1;
    int column = 1;
    const std::size_t end = std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InstanceError("syntax error", line, column);
  }
  try {
    if (!doc.is_object()) fail("instance must be a JSON object");
    if (read_string(field(doc, "format", "instance"), "format") != kFormatTag) fail("unsupported format tag");
    const Cost top = doc.contains("top") ? read_cost(doc.at("top"), "top") : kInfinity;
    Cfn cfn(top, doc.contains("name") ? read_string(doc.at("name"), "name") : "");
    std::set<std::string> names;
    for (const auto& v : field(doc, "variables", "instance")) {
      const std::string name = read_string(field(v, "name", "variable"), "variable name");
      if (!names.insert(name).second) fail("duplicate variable " + name);
      std::vector<std::string> labels;
      const auto& values = field(v, "values", "variable " + name);
      if (values.is_number_integer()) {
        for (int i = 0; i < values.get<int>(); ++i) labels.push_back(std::to_string(i));
      } else {
        for (const auto& l : values) labels.push_back(read_string(l, "variable " + name));
      }
      if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
        fail("variable " + name + " repeats a value");
      }
      if (labels.empty()) fail("variable " + name + " has an empty domain");
      cfn.add_variable(name, labels, v.contains("auxiliary") && v.at("auxiliary").get<bool>());
    }
    if (doc.contains("w_zero")) cfn.set_w_zero(read_cost(doc.at("w_zero"), "w_zero"));
    if (doc.contains("unary")) {
      for (const auto& [name, row] : doc.at("unary").items()) {
        const VarId x = cfn.find_variable(name);
        if (x < 0) fail("unary table for unknown variable " + name);
        if (!row.is_array() || row.size() != at(cfn.domain(x).initial_size())) {
          fail("unary table of " + name + " must list one cost per value");
        }
        for (int v = 0; v < cfn.domain(x).initial_size(); ++v) cfn.set_unary(x, v, read_cost(row[at(v)], "unary " + name));
      }
    }
    if (doc.contains("functions")) {
      int index = 0;
      for (const auto& func : doc.at("functions")) read_function(cfn, func, index++);
    }
    return cfn;
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(std::string("malformed instance: ") + e.what());
  } catch (const PreconditionError& e) {
    throw InstanceError(std::string("invalid instance: ") + e.what());
  }
}

Cfn load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string emit_instance(const Cfn& cfn) {
  Json doc;
  doc["format"] = std::string(kFormatTag);
  doc["name"] = cfn.name();
  doc["top"] = write_cost(cfn.top());
  Json vars = Json::array();
  for (VarId x = 0; x < cfn.num_variables(); ++x) {
    const auto& info = cfn.variable(x);
    Json v;
    v["name"] = info.name;
    v["values"] = info.labels;
    if (info.auxiliary) v["auxiliary"] = true;
    vars.push_back(v);
  }
  doc["variables"] = vars;
  doc["w_zero"] = write_cost(cfn.w_zero());
  Json unary = Json::object();
  for (VarId x = 0; x < cfn.num_variables(); ++x) {
    Json row = Json::array();
    bool any = false;
    for (int v = 0; v < cfn.domain(x).initial_size(); ++v) {
      row.push_back(write_cost(cfn.unary(x, v)));
      any = any || cfn.unary(x, v) != 0;
    }
    if (any) unary[cfn.variable(x).name] = row;
  }
  doc["unary"] = unary;
  Json fns = Json::array();
  for (int i = 0; i < cfn.num_functions(); ++i) fns.push_back(function_json(cfn, cfn.function(i)));
  doc["functions"] = fns;
  return doc.dump(1) + "\n";
}

void save_instance(const Cfn& cfn, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InstanceError("cannot write " + path);
  out << emit_instance(cfn);
}

}  // namespace cfn
