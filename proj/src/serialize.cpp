#include "regrobust/serialize.hpp"

#include <fstream>
#include <sstream>

#include "regrobust/errors.hpp"

namespace regrobust {

json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw ParseError(where + ": expected a rational string such as \"3/2\"");
}

json sequence_to_json(const Sequence& s) {
  json a = json::array();
  for (const auto& x : s) a.push_back(x.str());
  return a;
}

Sequence sequence_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rationals");
  Sequence s;
  s.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    s.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return s;
}

Sequence parse_sequence(std::string_view text) {
  Sequence s;
  std::string cur;
  std::string t(text);
  if (t.find_first_not_of(" \t") == std::string::npos) return s;
  std::stringstream ss(t);
  while (std::getline(ss, cur, ',')) s.push_back(Rational::parse(cur));
  return s;
}

std::string sequence_str(const Sequence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + s[i].pretty();
  return out;
}

namespace {

json operand_to_json(const Operand& o) {
  switch (o.kind) {
    case OperandKind::Reg: return {{"reg", o.index}};
    case OperandKind::Curr: return {{"curr", nullptr}};
    case OperandKind::Curr1: return {{"curr1", nullptr}};
    case OperandKind::Curr2: return {{"curr2", nullptr}};
    case OperandKind::Const: return {{"const", o.value.str()}};
  }
  return {};
}

Operand operand_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) throw ParseError(where + ": operand must be a one-key object");
  auto it = j.begin();
  const std::string& k = it.key();
  if (k == "reg") {
    if (!it->is_number_integer()) throw ParseError(where + ": register index must be an integer");
    return Operand::reg(it->get<int>());
  }
  if (k == "curr") return Operand::curr();
  if (k == "curr1") return Operand::curr1();
  if (k == "curr2") return Operand::curr2();
  if (k == "const") return Operand::constant(rational_from_json(*it, where));
  throw ParseError(where + ": unknown operand kind '" + k + "'");
}

json guard_to_json(const Guard& g) {
  json a = json::array();
  for (const auto& at : g) {
    json x{{"lhs", operand_to_json(at.lhs)}, {"op", cmp_str(at.op)}, {"rhs", operand_to_json(at.rhs)}};
    if (at.offset.sign() != 0) x["offset"] = at.offset.str();
    a.push_back(std::move(x));
  }
  return a;
}

Guard guard_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": guard must be an array");
  Guard g;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string w = where + "[" + std::to_string(i) + "]";
    const auto& a = j[i];
    if (!a.contains("lhs") || !a.contains("op") || !a.contains("rhs"))
      throw ParseError(w + ": atom needs lhs, op, rhs");
    GuardAtom at{operand_from_json(a["lhs"], w + ".lhs"), parse_cmp(a["op"].get<std::string>()),
                 operand_from_json(a["rhs"], w + ".rhs"), Rational(0)};
    if (a.contains("offset")) at.offset = rational_from_json(a["offset"], w + ".offset");
    g.push_back(std::move(at));
  }
  return g;
}

json assign_to_json(const Assignment& as) {
  json a = json::array();
  for (const auto& u : as) a.push_back({{"target", u.target}, {"src", operand_to_json(u.src)}});
  return a;
}

Assignment assign_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": assign must be an array");
  Assignment as;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string w = where + "[" + std::to_string(i) + "]";
    if (!j[i].contains("target") || !j[i].contains("src")) throw ParseError(w + ": needs target and src");
    as.push_back({j[i]["target"].get<int>(), operand_from_json(j[i]["src"], w + ".src")});
  }
  return as;
}

json accepting_to_json(const std::vector<bool>& acc) {
  json a = json::array();
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (acc[i]) a.push_back(i);
  return a;
}

std::vector<bool> accepting_from_json(const json& j, int n) {
  if (!j.is_array()) throw ParseError("accepting must be an array of state ids");
  std::vector<bool> acc(static_cast<std::size_t>(n), false);
  for (const auto& x : j) {
    int q = x.get<int>();
    if (q < 0 || q >= n) throw ParseError("accepting state " + std::to_string(q) + " out of range");
    acc[static_cast<std::size_t>(q)] = true;
  }
  return acc;
}

void require(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  for (const char* k : keys)
    if (!j.contains(k)) throw ParseError(where + ": missing key '" + k + "'");
}

template <class F>
auto wrap(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad automaton document: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid automaton: ") + e.what());
  }
}

}  // namespace

json to_json(const Dra& dra) {
  json ts = json::array();
  for (const auto& t : dra.transitions())
    ts.push_back({{"from", t.from},
                  {"to", t.to},
                  {"guard", guard_to_json(t.guard)},
                  {"assign", assign_to_json(t.assign)}});
  return {{"kind", "dra"},
          {"states", dra.num_states()},
          {"registers", dra.num_registers()},
          {"initial", dra.initial()},
          {"accepting", accepting_to_json(dra.accepting_set())},
          {"transitions", ts}};
}

json to_json(const Raa& raa) {
  json ts = json::array();
  for (const auto& t : raa.transitions())
    ts.push_back({{"from", t.from},
                  {"to", t.to},
                  {"guard", guard_to_json(t.guard)},
                  {"assign", assign_to_json(t.assign)},
                  {"acc", {{"a1", t.acc.a1.str()}, {"a2", t.acc.a2.str()}, {"b", t.acc.b.str()}}},
                  {"mov", move_str(t.mov)}});
  return {{"kind", "raa"},
          {"states", raa.num_states()},
          {"registers", raa.num_registers()},
          {"initial", raa.initial()},
          {"accepting", accepting_to_json(raa.accepting_set())},
          {"transitions", ts}};
}

Dra dra_from_json(const json& j) {
  return wrap([&] {
    require(j, {"kind", "states", "registers", "initial", "accepting", "transitions"}, "automaton");
    if (j["kind"] != "dra") throw ParseError("expected kind \"dra\"");
    int n = j["states"].get<int>();
    std::vector<Transition> ts;
    const auto& jt = j["transitions"];
    for (std::size_t i = 0; i < jt.size(); ++i) {
      std::string w = "transitions[" + std::to_string(i) + "]";
      require(jt[i], {"from", "to"}, w);
      Transition t;
      t.from = jt[i]["from"].get<int>();
      t.to = jt[i]["to"].get<int>();
      if (jt[i].contains("guard")) t.guard = guard_from_json(jt[i]["guard"], w + ".guard");
      if (jt[i].contains("assign")) t.assign = assign_from_json(jt[i]["assign"], w + ".assign");
      ts.push_back(std::move(t));
    }
    return Dra(n, j["registers"].get<int>(), j["initial"].get<int>(),
               accepting_from_json(j["accepting"], n), std::move(ts));
  });
}

Raa raa_from_json(const json& j) {
  return wrap([&] {
    require(j, {"kind", "states", "registers", "initial", "accepting", "transitions"}, "automaton");
    if (j["kind"] != "raa") throw ParseError("expected kind \"raa\"");
    int n = j["states"].get<int>();
    std::vector<RaaTransition> ts;
    const auto& jt = j["transitions"];
    for (std::size_t i = 0; i < jt.size(); ++i) {
      std::string w = "transitions[" + std::to_string(i) + "]";
      require(jt[i], {"from", "to", "acc", "mov"}, w);
      RaaTransition t;
      t.from = jt[i]["from"].get<int>();
      t.to = jt[i]["to"].get<int>();
      if (jt[i].contains("guard")) t.guard = guard_from_json(jt[i]["guard"], w + ".guard");
      if (jt[i].contains("assign")) t.assign = assign_from_json(jt[i]["assign"], w + ".assign");
      const auto& acc = jt[i]["acc"];
      require(acc, {"a1", "a2", "b"}, w + ".acc");
      t.acc = {rational_from_json(acc["a1"], w + ".acc.a1"), rational_from_json(acc["a2"], w + ".acc.a2"),
               rational_from_json(acc["b"], w + ".acc.b")};
      t.mov = parse_move(jt[i]["mov"].get<std::string>());
      ts.push_back(std::move(t));
    }
    return Raa(n, j["registers"].get<int>(), j["initial"].get<int>(),
               accepting_from_json(j["accepting"], n), std::move(ts));
  });
}

std::string serialize(const Dra& dra) { return to_json(dra).dump(2); }
std::string serialize(const Raa& raa) { return to_json(raa).dump(2); }

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string("JSON syntax error: ") + e.what(), line, col);
  }
}

Dra parse_dra(std::string_view text) { return dra_from_json(parse_json_text(text)); }
Raa parse_raa(std::string_view text) { return raa_from_json(parse_json_text(text)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << content;
}

Dra load_dra(const std::string& path) { return parse_dra(read_file(path)); }

}  // namespace regrobust
