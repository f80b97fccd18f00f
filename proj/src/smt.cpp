#include "regrobust/smt.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>
#include <variant>

#include "regrobust/dra_ops.hpp"
#include "regrobust/errors.hpp"
#include "regrobust/process.hpp"

namespace regrobust {

std::string smt_rational(const Rational& r) {
  const Rational a = r.abs();
  std::string s;
  if (a.is_integer()) {
    s = a.pretty() + ".0";
  } else {
    const std::string t = a.str();
    const auto slash = t.find('/');
    s = "(/ " + t.substr(0, slash) + ".0 " + t.substr(slash + 1) + ".0)";
  }
  return r.sign() < 0 ? "(- " + s + ")" : s;
}

namespace {

struct Trie {
  struct Node {
    int parent = -1;
    Rational letter;
    std::map<Rational, int> children;
  };
  std::vector<Node> nodes{Node{}};

  int insert(const Sequence& w, std::vector<int>* path = nullptr) {
    int u = 0;
    for (const auto& a : w) {
      auto it = nodes[static_cast<std::size_t>(u)].children.find(a);
      if (it == nodes[static_cast<std::size_t>(u)].children.end()) {
        nodes.push_back({u, a, {}});
        const int id = static_cast<int>(nodes.size()) - 1;
        nodes[static_cast<std::size_t>(u)].children.emplace(a, id);
        u = id;
      } else {
        u = it->second;
      }
      if (path) path->push_back(u);
    }
    return u;
  }
};

std::string name(const char* base, std::initializer_list<int> idx) {
  std::string s = base;
  for (int i : idx) s += "_" + std::to_string(i);
  return s;
}

std::string t_var(int p, int g) { return name("t", {p, g}); }
std::string y_var(int p, int g, int q) { return name("y", {p, g, q}); }
std::string b_var(int p, int g, int i, int s) { return name("b", {p, g, i, s}); }
std::string f_var(int q) { return name("f", {q}); }
std::string x_var(int u, int q) { return name("x", {u, q}); }
std::string h_var(int u, int p, int g) { return name("h", {u, p, g}); }
std::string v_var(int u, int i, int m) { return name("v", {u, i, m}); }

bool free_slots(const SynthesisParams& p) { return !p.constant_pool.has_value(); }

std::string slot(int j, const SynthesisParams& p) {
  if (free_slots(p)) return name("C", {j});
  return smt_rational((*p.constant_pool)[static_cast<std::size_t>(j)]);
}

void check_params(const SynthesisParams& p) {
  if (p.n < 1 || p.k < 0 || p.c < 0) throw InvalidArgument("synthesis needs n >= 1, k >= 0, c >= 0");
  if (p.constant_pool && static_cast<int>(p.constant_pool->size()) < p.c)
    throw InvalidArgument("constant pool smaller than the number of constant slots");
}

// A value a register can hold: a known rational or a constant slot.
struct Held {
  bool slot = false;
  int index = 0;
  Rational q;
};

// "a < b" (or "<=") as an SMT term, folded to true/false when both sides are known.
std::string held_cmp(const Held& a, bool strict, const Held& b, const SynthesisParams& p) {
  auto known = [&](const Held& h) -> std::optional<Rational> {
    if (!h.slot) return h.q;
    if (p.constant_pool) return (*p.constant_pool)[static_cast<std::size_t>(h.index)];
    return std::nullopt;
  };
  const auto ka = known(a), kb = known(b);
  if (ka && kb) return compare(*ka, strict ? Cmp::Lt : Cmp::Le, *kb) ? "true" : "false";
  if (a.slot && b.slot && a.index == b.index) return strict ? "false" : "true";
  auto term = [&](const Held& h) { return h.slot ? slot(h.index, p) : smt_rational(h.q); };
  return std::string("(") + (strict ? "<" : "<=") + " " + term(a) + " " + term(b) + ")";
}

std::string conj(const std::vector<std::string>& xs) {
  if (xs.empty()) return "true";
  if (xs.size() == 1) return xs[0];
  std::string s = "(and";
  for (const auto& x : xs) s += " " + x;
  return s + ")";
}

std::string disj(const std::vector<std::string>& xs) {
  if (xs.empty()) return "false";
  if (xs.size() == 1) return xs[0];
  std::string s = "(or";
  for (const auto& x : xs) s += " " + x;
  return s + ")";
}

void exactly_one(std::ostream& o, const std::vector<std::string>& xs) {
  o << "(assert " << disj(xs) << ")\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) o << "(assert (not (and " << xs[i] << " " << xs[j] << ")))\n";
}

// --- model parsing ---------------------------------------------------------

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
};

SExpr parse_sexpr(const std::string& t, std::size_t& i) {
  auto skip = [&] {
    while (i < t.size() && (std::isspace(static_cast<unsigned char>(t[i])) || t[i] == ';')) {
      if (t[i] == ';')
        while (i < t.size() && t[i] != '\n') ++i;
      else
        ++i;
    }
  };
  skip();
  if (i >= t.size()) throw MalformedModel("unexpected end of model");
  if (t[i] == '(') {
    ++i;
    SExpr e;
    e.is_list = true;
    for (;;) {
      skip();
      if (i >= t.size()) throw MalformedModel("unbalanced parentheses in model");
      if (t[i] == ')') {
        ++i;
        return e;
      }
      e.list.push_back(parse_sexpr(t, i));
    }
  }
  if (t[i] == ')') throw MalformedModel("unexpected ')' in model");
  SExpr e;
  if (t[i] == '|') {
    const auto end = t.find('|', i + 1);
    if (end == std::string::npos) throw MalformedModel("unterminated quoted symbol");
    e.atom = t.substr(i + 1, end - i - 1);
    i = end + 1;
    return e;
  }
  while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i])) && t[i] != '(' && t[i] != ')')
    e.atom += t[i++];
  return e;
}

using Value = std::variant<bool, Rational>;

Value eval(const SExpr& e) {
  if (!e.is_list) {
    if (e.atom == "true") return true;
    if (e.atom == "false") return false;
    try {
      return Rational::parse(e.atom);
    } catch (const Error&) {
      throw MalformedModel("unexpected value '" + e.atom + "' in model");
    }
  }
  if (e.list.empty() || e.list[0].is_list) throw MalformedModel("unexpected value in model");
  const std::string& op = e.list[0].atom;
  auto num = [&](std::size_t i) {
    Value v = eval(e.list.at(i));
    if (!std::holds_alternative<Rational>(v)) throw MalformedModel("expected a number in model");
    return std::get<Rational>(v);
  };
  if (op == "-" && e.list.size() == 2) return -num(1);
  if (op == "-" && e.list.size() == 3) return num(1) - num(2);
  if (op == "/" && e.list.size() == 3) {
    Rational d = num(2);
    if (d.sign() == 0) throw MalformedModel("division by zero in model");
    return num(1) / d;
  }
  if (op == "to_real" && e.list.size() == 2) return num(1);
  throw MalformedModel("unsupported model term '" + op + "'");
}

std::map<std::string, Value> parse_model(const std::string& text) {
  std::size_t i = 0;
  SExpr top = parse_sexpr(text, i);
  if (!top.is_list) throw MalformedModel("model must be a list: " + top.atom);
  std::map<std::string, Value> out;
  for (const auto& d : top.list) {
    if (!d.is_list) {
      if (d.atom == "model") continue;
      throw MalformedModel("unexpected atom '" + d.atom + "' in model");
    }
    if (d.list.size() != 5 || d.list[0].atom != "define-fun" || !d.list[2].is_list || !d.list[2].list.empty())
      throw MalformedModel("expected (define-fun name () Sort value) in model");
    out[d.list[1].atom] = eval(d.list[4]);
  }
  return out;
}

}  // namespace

std::string encode(const SampleSet& s, const SynthesisParams& p) {
  check_params(p);
  const int n = p.n, k = p.k, c = p.c;
  const auto shapes = enumerate_shapes(k, c);
  const int G = static_cast<int>(shapes.size());
  const int S = k + c + 1;

  Trie trie;
  std::vector<std::vector<int>> pos_paths;
  std::vector<int> neg_ends;
  for (const auto& w : s.positives) {
    pos_paths.emplace_back();
    trie.insert(w, &pos_paths.back());
  }
  for (const auto& w : s.negatives) neg_ends.push_back(trie.insert(w));
  const int U = static_cast<int>(trie.nodes.size());

  std::ostringstream o;
  o << "(set-logic QF_LRA)\n";
  for (int p_ = 0; p_ < n; ++p_)
    for (int g = 0; g < G; ++g) {
      o << "(declare-const " << t_var(p_, g) << " Bool)\n";
      for (int q = 0; q < n; ++q) o << "(declare-const " << y_var(p_, g, q) << " Bool)\n";
      for (int i = 0; i < k; ++i)
        for (int src = 0; src < S; ++src) o << "(declare-const " << b_var(p_, g, i, src) << " Bool)\n";
    }
  for (int q = 0; q < n; ++q) o << "(declare-const " << f_var(q) << " Bool)\n";
  if (free_slots(p))
    for (int j = 0; j < c; ++j) {
      o << "(declare-const " << slot(j, p) << " Real)\n";
      o << "(assert (and (<= " << smt_rational(-p.constant_bound) << " " << slot(j, p) << ") (<= " << slot(j, p)
        << " " << smt_rational(p.constant_bound) << ")))\n";
    }
  // Register contents are tracked symbolically: at prefix u a register holds
  // one of the values vals[u] (0, a letter of u, or a constant slot), one-hot
  // in v_u_i_m. Comparisons with the current letter are then static or
  // reduce to slot-versus-letter atoms.
  std::vector<std::vector<Held>> vals(static_cast<std::size_t>(U));
  vals[0].push_back({false, 0, Rational(0)});
  for (int j = 0; j < c; ++j) vals[0].push_back({true, j, {}});
  for (int u = 0; u < U; ++u) {
    for (int q = 0; q < n; ++q) o << "(declare-const " << x_var(u, q) << " Bool)\n";
    if (u > 0) {
      const auto& node = trie.nodes[static_cast<std::size_t>(u)];
      auto& vs = vals[static_cast<std::size_t>(u)];
      vs = vals[static_cast<std::size_t>(node.parent)];
      if (std::none_of(vs.begin(), vs.end(), [&](const Held& h) { return !h.slot && h.q == node.letter; }))
        vs.push_back({false, 0, node.letter});
      for (int p_ = 0; p_ < n; ++p_)
        for (int g = 0; g < G; ++g) o << "(declare-const " << h_var(u, p_, g) << " Bool)\n";
    }
    for (int i = 0; i < k; ++i)
      for (std::size_t m = 0; m < vals[static_cast<std::size_t>(u)].size(); ++m)
        o << "(declare-const " << v_var(u, i, static_cast<int>(m)) << " Bool)\n";
  }
  for (int i = 0; i < k; ++i)
    for (std::size_t m = 0; m < vals[0].size(); ++m)
      o << "(assert " << (m == 0 ? "" : "(not ") << v_var(0, i, static_cast<int>(m)) << (m == 0 ? "" : ")") << ")\n";

  // one target and one update source per used (state, guard)
  for (int p_ = 0; p_ < n; ++p_)
    for (int g = 0; g < G; ++g) {
      std::vector<std::string> ys;
      for (int q = 0; q < n; ++q) ys.push_back(y_var(p_, g, q));
      exactly_one(o, ys);
      for (int i = 0; i < k; ++i) {
        std::vector<std::string> bs;
        for (int src = 0; src < S; ++src) bs.push_back(b_var(p_, g, i, src));
        exactly_one(o, bs);
      }
    }

  // the empty prefix is in q0 with all registers 0
  o << "(assert " << x_var(0, 0) << ")\n";
  for (int q = 1; q < n; ++q) o << "(assert (not " << x_var(0, q) << "))\n";

  for (int v = 1; v < U; ++v) {
    const auto& node = trie.nodes[static_cast<std::size_t>(v)];
    const int u = node.parent;
    const Held letter{false, 0, node.letter};
    const auto& vu = vals[static_cast<std::size_t>(u)];
    const auto& vv = vals[static_cast<std::size_t>(v)];

    // endpoint e compared with the letter: index [strict] for low (e < a) and high (a < e)
    auto reg_bound = [&](int i, bool strict, bool low) {
      std::vector<std::string> ways;
      for (std::size_t m = 0; m < vu.size(); ++m) {
        const std::string at = low ? held_cmp(vu[m], strict, letter, p) : held_cmp(letter, strict, vu[m], p);
        if (at == "false") continue;
        const std::string var = v_var(u, i, static_cast<int>(m));
        ways.push_back(at == "true" ? var : "(and " + var + " " + at + ")");
      }
      const std::string name_ = std::string(low ? "lo" : "hi") + (strict ? "s" : "n") + "_" + std::to_string(v) +
                                "_" + std::to_string(i);
      o << "(declare-const " << name_ << " Bool)\n(assert (= " << name_ << " " << disj(ways) << "))\n";
      return name_;
    };
    std::vector<std::array<std::array<std::string, 2>, 2>> reg_cmp(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
      for (int st = 0; st < 2; ++st)
        for (int lo = 0; lo < 2; ++lo) reg_cmp[static_cast<std::size_t>(i)][st][lo] = reg_bound(i, st, lo);
    auto bound = [&](const Endpoint& e, bool strict, bool low) -> std::string {
      if (e.kind == EndKind::Reg) return reg_cmp[static_cast<std::size_t>(e.index)][strict][low];
      const Held h{true, e.index, {}};
      return low ? held_cmp(h, strict, letter, p) : held_cmp(letter, strict, h, p);
    };

    for (int p_ = 0; p_ < n; ++p_)
      for (int g = 0; g < G; ++g) {
        const auto& sh = shapes[static_cast<std::size_t>(g)];
        std::vector<std::string> parts{x_var(u, p_), t_var(p_, g)};
        if (sh.low.kind != EndKind::None) parts.push_back(bound(sh.low, sh.low_strict, true));
        if (sh.high.kind != EndKind::None) parts.push_back(bound(sh.high, sh.high_strict, false));
        if (std::find(parts.begin(), parts.end(), "false") != parts.end()) parts = {"false"};
        parts.erase(std::remove(parts.begin(), parts.end(), "true"), parts.end());
        o << "(assert (= " << h_var(v, p_, g) << " " << conj(parts) << "))\n";
      }

    // register updates, through the source actually used on this letter
    for (int i = 0; i < k; ++i)
      for (int src = 0; src < S; ++src) {
        std::vector<std::string> ways;
        for (int p_ = 0; p_ < n; ++p_)
          for (int g = 0; g < G; ++g) ways.push_back("(and " + h_var(v, p_, g) + " " + b_var(p_, g, i, src) + ")");
        std::vector<std::string> eff;
        for (std::size_t m = 0; m < vv.size(); ++m) {
          const std::string var = v_var(v, i, static_cast<int>(m));
          bool on = false;
          if (src < k) {
            if (m < vu.size()) {
              eff.push_back("(= " + var + " " + v_var(u, src, static_cast<int>(m)) + ")");
              continue;
            }
          } else if (src < k + c) {
            on = vv[m].slot && vv[m].index == src - k;
          } else {
            on = !vv[m].slot && vv[m].q == node.letter;
          }
          eff.push_back(on ? var : "(not " + var + ")");
        }
        o << "(assert (=> " << disj(ways) << " " << conj(eff) << "))\n";
      }

    // exact run semantics: v reaches q iff some firing transition targets q
    for (int q = 0; q < n; ++q) {
      std::vector<std::string> ways;
      for (int p_ = 0; p_ < n; ++p_)
        for (int g = 0; g < G; ++g) ways.push_back("(and " + h_var(v, p_, g) + " " + y_var(p_, g, q) + ")");
      o << "(assert (= " << x_var(v, q) << " " << disj(ways) << "))\n";
    }
    for (int q = 0; q < n; ++q)
      for (int q2 = q + 1; q2 < n; ++q2)
        o << "(assert (not (and " << x_var(v, q) << " " << x_var(v, q2) << ")))\n";
  }

  for (const auto& path : pos_paths) {
    for (int u : path) {
      std::vector<std::string> xs;
      for (int q = 0; q < n; ++q) xs.push_back(x_var(u, q));
      o << "(assert " << disj(xs) << ")\n";
    }
    const int end = path.empty() ? 0 : path.back();
    for (int q = 0; q < n; ++q) o << "(assert (=> " << x_var(end, q) << " " << f_var(q) << "))\n";
  }
  for (int end : neg_ends)
    for (int q = 0; q < n; ++q) o << "(assert (=> " << x_var(end, q) << " (not " << f_var(q) << ")))\n";
  return o.str();
}

std::string blocking_clause(int p, int g1, int g2, const SynthesisParams& params) {
  const auto shapes = enumerate_shapes(params.k, params.c);
  const auto& a = shapes.at(static_cast<std::size_t>(g1));
  const auto& b = shapes.at(static_cast<std::size_t>(g2));
  // The intervals meet iff every lower end can lie below every upper end;
  // all constraints pass through curr, so pairwise checks suffice.
  std::vector<std::string> conds;
  bool never = false;
  for (const auto* lo : {&a, &b})
    for (const auto* hi : {&a, &b}) {
      const Endpoint& l = lo->low;
      const Endpoint& h = hi->high;
      const bool strict = lo->low_strict || hi->high_strict;
      if (l.kind == EndKind::None || h.kind == EndKind::None) continue;
      if (l.kind == EndKind::Reg && h.kind == EndKind::Reg) {
        if (l.index == h.index && strict) never = true;
        continue;
      }
      if (l.kind != EndKind::Const || h.kind != EndKind::Const) continue;
      if (free_slots(params)) {
        if (l.index == h.index) {
          if (strict) never = true;
          continue;
        }
        conds.push_back(std::string("(") + (strict ? "<" : "<=") + " " + slot(l.index, params) + " " +
                        slot(h.index, params) + ")");
      } else {
        const auto& pool = *params.constant_pool;
        if (!compare(pool[static_cast<std::size_t>(l.index)], strict ? Cmp::Lt : Cmp::Le,
                     pool[static_cast<std::size_t>(h.index)]))
          never = true;
      }
    }
  if (never) return "";
  conds.insert(conds.begin(), {t_var(p, g1), t_var(p, g2)});
  return "(assert (not " + conj(conds) + "))\n";
}

DecodedModel decode_model_full(const std::string& model_text, const SynthesisParams& p) {
  check_params(p);
  const auto m = parse_model(model_text);
  auto boolean = [&](const std::string& v) {
    auto it = m.find(v);
    if (it == m.end()) return false;
    if (!std::holds_alternative<bool>(it->second)) throw MalformedModel(v + " is not boolean in the model");
    return std::get<bool>(it->second);
  };
  DecodedModel out;
  for (int j = 0; j < p.c; ++j) {
    if (!free_slots(p)) {
      out.constants.push_back((*p.constant_pool)[static_cast<std::size_t>(j)]);
      continue;
    }
    auto it = m.find(slot(j, p));
    if (it != m.end() && !std::holds_alternative<Rational>(it->second))
      throw MalformedModel(slot(j, p) + " is not a number in the model");
    out.constants.push_back(it == m.end() ? Rational(0) : std::get<Rational>(it->second));
  }
  const auto shapes = enumerate_shapes(p.k, p.c);
  const int S = p.k + p.c + 1;
  std::vector<Transition> ts;
  for (int q = 0; q < p.n; ++q)
    for (int g = 0; g < static_cast<int>(shapes.size()); ++g) {
      if (!boolean(t_var(q, g))) continue;
      int target = -1;
      for (int q2 = 0; q2 < p.n && target < 0; ++q2)
        if (boolean(y_var(q, g, q2))) target = q2;
      if (target < 0) throw MalformedModel("transition " + t_var(q, g) + " has no target");
      std::vector<int> codes;
      for (int i = 0; i < p.k; ++i) {
        int src = -1;
        for (int s = 0; s < S && src < 0; ++s)
          if (boolean(b_var(q, g, i, s))) src = s;
        if (src < 0) throw MalformedModel("transition " + t_var(q, g) + " has no update for r" + std::to_string(i));
        codes.push_back(src);
      }
      Guard guard = shape_guard(shapes[static_cast<std::size_t>(g)], out.constants);
      if (!guard_satisfiable(guard, p.k)) continue;
      ts.push_back({q, std::move(guard), make_assignment(codes, p.k, out.constants), target});
      out.origin.push_back({q, g});
    }
  std::vector<bool> acc;
  for (int q = 0; q < p.n; ++q) acc.push_back(boolean(f_var(q)));
  out.dra = Dra(p.n, p.k, 0, std::move(acc), std::move(ts));
  return out;
}

Dra decode_model(const std::string& model_text, const SynthesisParams& p) {
  return decode_model_full(model_text, p).dra;
}

bool validate_consistency(const Dra& dra, const SampleSet& s) { return consistent(dra, s); }

std::string default_solver_command() {
  const char* env = std::getenv("REGROBUST_SOLVER");
  return env && *env ? env : "z3 -in -smt2";
}

struct SmtSession::Impl {
  explicit Impl(const std::vector<std::string>& argv) : proc(argv) {}
  Subprocess proc;
};

SmtSession::SmtSession(const SolverConfig& cfg) : impl_(nullptr) {
  const std::string cmd = cfg.command.empty() ? default_solver_command() : cfg.command;
  try {
    impl_ = new Impl(split_command(cmd));
  } catch (const Error& e) {
    throw SolverError(std::string("cannot start solver: ") + e.what());
  }
  if (cmd.find("z3") != std::string::npos && cfg.timeout > 0)
    send("(set-option :timeout " + std::to_string(static_cast<long long>(cfg.timeout * 1000)) + ")\n");
}

SmtSession::~SmtSession() {
  if (!impl_) return;
  try {
    impl_->proc.write("(exit)\n");
  } catch (const Error&) {
  }
  delete impl_;
}

void SmtSession::send(const std::string& text) {
  try {
    impl_->proc.write(text);
  } catch (const Error& e) {
    throw SolverError(e.what());
  }
}

std::string SmtSession::read_response() {
  std::string text, line;
  int depth = 0;
  bool seen = false;
  while (impl_->proc.read_line(line)) {
    for (char ch : line) {
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (!std::isspace(static_cast<unsigned char>(ch))) seen = true;
    }
    text += line + "\n";
    if (seen && depth <= 0) {
      if (text.rfind("(error", 0) == 0) throw SolverError("solver: " + text);
      return text;
    }
  }
  throw SolverError("solver exited unexpectedly" + (text.empty() ? "" : ": " + text));
}

std::string SmtSession::check_sat() {
  send("(check-sat)\n");
  std::string r = read_response();
  r.erase(r.find_last_not_of(" \t\r\n") + 1);
  if (r != "sat" && r != "unsat" && r != "unknown") throw SolverError("unexpected check-sat answer: " + r);
  return r;
}

std::string SmtSession::get_model() {
  send("(get-model)\n");
  return read_response();
}

ShapeOutcome solve_shape(const SampleSet& s, const SynthesisParams& p, const SolverConfig& cfg,
                         double deadline_seconds) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  ShapeOutcome out;
  SmtSession ses(cfg);
  ses.send(encode(s, p));
  for (;;) {
    out.status = ses.check_sat();
    if (out.status != "sat") return out;
    DecodedModel d = decode_model_full(ses.get_model(), p);
    auto viol = check_determinism(d.dra);
    if (viol.empty()) {
      out.model = std::move(d);
      return out;
    }
    for (const auto& v : viol) {
      auto [q, ga] = d.origin[static_cast<std::size_t>(v.first)];
      const int gb = d.origin[static_cast<std::size_t>(v.second)].second;
      std::string clause = blocking_clause(q, ga, gb, p);
      if (clause.empty()) throw Error("blocking clause for an overlapping pair is empty");
      ses.send(clause);
      ++out.blocking_clauses;
    }
    if (deadline_seconds > 0 && elapsed() > deadline_seconds) {
      out.status = "unknown";
      return out;
    }
  }
}

SynthesisResult synthesize(const SampleSet& s, const SynthesisOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  const int max_c = opts.constant_pool
                        ? std::min(opts.max_constants, static_cast<int>(opts.constant_pool->size()))
                        : opts.max_constants;
  std::vector<std::tuple<int, int, int>> shapes;
  for (int n = 1; n <= opts.max_states; ++n)
    for (int k = 0; k <= opts.max_registers; ++k)
      for (int c = 0; c <= max_c; ++c) shapes.emplace_back(n, k, c);
  std::stable_sort(shapes.begin(), shapes.end(), [](const auto& a, const auto& b) {
    auto [n1, k1, c1] = a;
    auto [n2, k2, c2] = b;
    return std::make_tuple(n1 + k1 + c1, n1, k1, c1) < std::make_tuple(n2 + k2 + c2, n2, k2, c2);
  });

  SynthesisResult res;
  for (auto [n, k, c] : shapes) {
    const double left = opts.budget - elapsed();
    if (left <= 0) break;
    SynthesisParams p;
    p.n = n;
    p.k = k;
    p.c = c;
    p.constant_pool = opts.constant_pool;
    ++res.candidates;
    SolverConfig cfg = opts.solver;
    cfg.timeout = std::min(cfg.timeout > 0 ? cfg.timeout : left, left);
    const std::string tag = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " c=" + std::to_string(c);
    ShapeOutcome shape = solve_shape(s, p, cfg, left);
    res.blocking_clauses += shape.blocking_clauses;
    if (!shape.model) {
      res.log.push_back(tag + ": " + shape.status);
      continue;
    }
    if (!validate_consistency(shape.model->dra, s))
      throw SolverError("decoded automaton (" + tag + ") is inconsistent with the samples");
    res.log.push_back(tag + ": sat after " + std::to_string(shape.blocking_clauses) + " blocking clauses");
    res.dra = std::move(shape.model->dra);
    res.params = p;
    res.constants = std::move(shape.model->constants);
    return res;
  }
  throw BudgetExhausted("no consistent deterministic automaton found within the budget (" +
                        std::to_string(res.candidates) + " shapes tried)");
}

}  // namespace regrobust
