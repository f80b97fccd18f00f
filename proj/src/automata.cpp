#include "regrobust/automata.hpp"

#include <algorithm>
#include <sstream>

#include "regrobust/errors.hpp"

namespace regrobust {

const char* cmp_str(Cmp c) {
  switch (c) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Eq: return "=";
    case Cmp::Ne: return "!=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

Cmp parse_cmp(const std::string& s) {
  if (s == "<") return Cmp::Lt;
  if (s == "<=" || s == "≤") return Cmp::Le;
  if (s == "=" || s == "==") return Cmp::Eq;
  if (s == "!=" || s == "≠") return Cmp::Ne;
  if (s == ">") return Cmp::Gt;
  if (s == ">=" || s == "≥") return Cmp::Ge;
  throw ParseError("unknown comparison '" + s + "'");
}

Cmp mirror(Cmp c) {
  switch (c) {
    case Cmp::Lt: return Cmp::Gt;
    case Cmp::Le: return Cmp::Ge;
    case Cmp::Gt: return Cmp::Lt;
    case Cmp::Ge: return Cmp::Le;
    default: return c;
  }
}

Cmp relax(Cmp c) {
  if (c == Cmp::Lt) return Cmp::Le;
  if (c == Cmp::Gt) return Cmp::Ge;
  return c;
}

bool compare(const Rational& a, Cmp op, const Rational& b) {
  switch (op) {
    case Cmp::Lt: return a < b;
    case Cmp::Le: return a <= b;
    case Cmp::Eq: return a == b;
    case Cmp::Ne: return a != b;
    case Cmp::Gt: return a > b;
    case Cmp::Ge: return a >= b;
  }
  return false;
}

std::string to_string(const Operand& o) {
  switch (o.kind) {
    case OperandKind::Reg: return "r" + std::to_string(o.index);
    case OperandKind::Curr: return "curr";
    case OperandKind::Curr1: return "curr1";
    case OperandKind::Curr2: return "curr2";
    case OperandKind::Const: return o.value.pretty();
  }
  return "?";
}

std::string to_string(const GuardAtom& a) {
  std::string s = to_string(a.lhs) + " " + cmp_str(a.op) + " " + to_string(a.rhs);
  if (a.offset.sign() > 0) s += " + " + a.offset.pretty();
  if (a.offset.sign() < 0) s += " - " + a.offset.abs().pretty();
  return s;
}

std::string to_string(const Guard& g) {
  if (g.empty()) return "true";
  std::string s;
  for (std::size_t i = 0; i < g.size(); ++i) s += (i ? " & " : "") + to_string(g[i]);
  return s;
}

std::string to_string(const Assignment& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (i ? ", " : "") + ("r" + std::to_string(a[i].target)) + " := " + to_string(a[i].src);
  return s;
}

const Rational* resolve(const Operand& o, const Env& env) {
  switch (o.kind) {
    case OperandKind::Reg: return env.regs + o.index;
    case OperandKind::Curr: return env.curr;
    case OperandKind::Curr1: return env.curr1;
    case OperandKind::Curr2: return env.curr2;
    case OperandKind::Const: return &o.value;
  }
  return nullptr;
}

bool holds(const GuardAtom& a, const Env& env) {
  const Rational* l = resolve(a.lhs, env);
  const Rational* r = resolve(a.rhs, env);
  if (!l || !r) throw InvalidArgument("guard reads an undefined letter: " + to_string(a));
  if (a.offset.sign() == 0) return compare(*l, a.op, *r);
  return compare(*l, a.op, *r + a.offset);
}

bool holds(const Guard& g, const Env& env) {
  for (const auto& a : g)
    if (!holds(a, env)) return false;
  return true;
}

void apply(const Assignment& a, const Env& env, std::span<const Rational> before,
           std::span<Rational> after) {
  std::copy(before.begin(), before.end(), after.begin());
  for (const auto& u : a) {
    const Rational* v = resolve(u.src, env);
    if (!v) throw InvalidArgument("assignment reads an undefined letter");
    after[static_cast<std::size_t>(u.target)] = *v;
  }
}

bool references(const Guard& g, OperandKind k) {
  return std::any_of(g.begin(), g.end(),
                     [k](const GuardAtom& a) { return a.lhs.kind == k || a.rhs.kind == k; });
}

bool references(const Assignment& a, OperandKind k) {
  return std::any_of(a.begin(), a.end(), [k](const Update& u) { return u.src.kind == k; });
}

namespace {

void validate_operand(const Operand& o, int k, const std::string& where) {
  if (o.kind == OperandKind::Reg && (o.index < 0 || o.index >= k))
    throw InvalidArgument(where + ": register index " + std::to_string(o.index) + " out of range");
  if (o.kind == OperandKind::Curr1 || o.kind == OperandKind::Curr2)
    throw InvalidArgument(where + ": two-head letter in a DRA");
}

}  // namespace

Dra::Dra(int num_states, int num_registers, int initial, std::vector<bool> accepting,
         std::vector<Transition> transitions)
    : num_states_(num_states),
      num_registers_(num_registers),
      initial_(initial),
      accepting_(std::move(accepting)),
      transitions_(std::move(transitions)) {
  if (num_states_ < 1) throw InvalidArgument("a DRA needs at least one state");
  if (num_registers_ < 0) throw InvalidArgument("negative register count");
  if (initial_ < 0 || initial_ >= num_states_) throw InvalidArgument("initial state out of range");
  if (accepting_.size() != static_cast<std::size_t>(num_states_))
    throw InvalidArgument("accepting set size differs from state count");
  out_.assign(static_cast<std::size_t>(num_states_), {});
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    std::string where = "transition " + std::to_string(i);
    if (t.from < 0 || t.from >= num_states_ || t.to < 0 || t.to >= num_states_)
      throw InvalidArgument(where + ": state out of range");
    for (const auto& a : t.guard) {
      validate_operand(a.lhs, num_registers_, where);
      validate_operand(a.rhs, num_registers_, where);
      if (a.lhs.is_const() && a.rhs.is_const())
        throw InvalidArgument(where + ": guard atom compares two constants");
      if (a.offset.sign() != 0) throw InvalidArgument(where + ": offset atom in a DRA");
    }
    std::vector<bool> seen(static_cast<std::size_t>(num_registers_), false);
    for (const auto& u : t.assign) {
      if (u.target < 0 || u.target >= num_registers_)
        throw InvalidArgument(where + ": assignment target out of range");
      if (seen[static_cast<std::size_t>(u.target)])
        throw InvalidArgument(where + ": register assigned twice");
      seen[static_cast<std::size_t>(u.target)] = true;
      validate_operand(u.src, num_registers_, where);
    }
    out_[static_cast<std::size_t>(t.from)].push_back(static_cast<int>(i));
  }
}

Dra Dra::with_accepting(std::vector<bool> acc) const {
  Dra d = *this;
  if (acc.size() != accepting_.size()) throw InvalidArgument("accepting set size mismatch");
  d.accepting_ = std::move(acc);
  return d;
}

Dra Dra::with_outgoing(int q, std::vector<Transition> replacement) const {
  std::vector<Transition> ts;
  ts.reserve(transitions_.size() + replacement.size());
  for (const auto& t : replacement)
    if (t.from != q) throw InvalidArgument("replacement transition leaves another state");
  // the replacement takes the place of q's old block (or of the first later state)
  bool placed = false;
  auto place = [&] {
    if (placed) return;
    for (auto& t : replacement) ts.push_back(std::move(t));
    placed = true;
  };
  for (const auto& t : transitions_) {
    if (t.from == q || t.from > q) place();
    if (t.from != q) ts.push_back(t);
  }
  place();
  return Dra(num_states_, num_registers_, initial_, accepting_, std::move(ts));
}

bool operator==(const Dra& a, const Dra& b) {
  return a.num_states_ == b.num_states_ && a.num_registers_ == b.num_registers_ &&
         a.initial_ == b.initial_ && a.accepting_ == b.accepting_ &&
         a.transitions_ == b.transitions_;
}

int step(const Dra& dra, int& state, std::vector<Rational>& regs, const Rational& letter,
         std::vector<Rational>& scratch) {
  Env env{regs.data(), &letter, nullptr, nullptr};
  int fired = -1;
  for (int ti : dra.outgoing(state)) {
    const auto& t = dra.transitions()[static_cast<std::size_t>(ti)];
    if (!holds(t.guard, env)) continue;
    if (fired >= 0)
      throw MultipleEnabledTransitions("state " + std::to_string(state) + ": transitions " +
                                       std::to_string(fired) + " and " + std::to_string(ti) +
                                       " both enabled");
    fired = ti;
  }
  if (fired < 0) return -1;
  const auto& t = dra.transitions()[static_cast<std::size_t>(fired)];
  if (!t.assign.empty()) {
    scratch.resize(regs.size());
    apply(t.assign, env, regs, scratch);
    regs.swap(scratch);
  }
  state = t.to;
  return fired;
}

RunResult run(const Dra& dra, std::span<const Rational> seq) {
  RunResult res;
  int state = dra.initial();
  std::vector<Rational> regs(static_cast<std::size_t>(dra.num_registers()));
  std::vector<Rational> scratch;
  res.trace.reserve(seq.size() + 1);
  for (const auto& letter : seq) {
    Configuration c{state, regs};
    int t = step(dra, state, regs, letter, scratch);
    if (t < 0) {
      res.trace.push_back({std::move(c), TraceStep::kDeath});
      res.died = true;
      res.accepted = false;
      return res;
    }
    res.trace.push_back({std::move(c), t});
  }
  res.trace.push_back({Configuration{state, regs}, TraceStep::kEnd});
  res.accepted = dra.accepting(state);
  return res;
}

bool accepts(const Dra& dra, std::span<const Rational> seq) {
  int state = dra.initial();
  std::vector<Rational> regs(static_cast<std::size_t>(dra.num_registers()));
  std::vector<Rational> scratch;
  for (const auto& letter : seq)
    if (step(dra, state, regs, letter, scratch) < 0) return false;
  return dra.accepting(state);
}

}  // namespace regrobust
