#include "regrobust/raa.hpp"

#include <map>
#include <queue>

#include "regrobust/dra_ops.hpp"
#include "regrobust/errors.hpp"

namespace regrobust {

const char* move_str(Move m) {
  switch (m) {
    case Move::Head1: return "head1";
    case Move::Head2: return "head2";
    case Move::Both: return "both";
  }
  return "?";
}

Move parse_move(const std::string& s) {
  if (s == "head1" || s == "1") return Move::Head1;
  if (s == "head2" || s == "2") return Move::Head2;
  if (s == "both") return Move::Both;
  throw ParseError("unknown head movement '" + s + "'");
}

bool needs_head1(const RaaTransition& t) {
  return moves_head1(t.mov) || references(t.guard, OperandKind::Curr1) ||
         references(t.assign, OperandKind::Curr1) || t.acc.a1.sign() != 0;
}

bool needs_head2(const RaaTransition& t) {
  return moves_head2(t.mov) || references(t.guard, OperandKind::Curr2) ||
         references(t.assign, OperandKind::Curr2) || t.acc.a2.sign() != 0;
}

Raa::Raa(int num_states, int num_registers, int initial, std::vector<bool> accepting,
         std::vector<RaaTransition> transitions)
    : num_states_(num_states),
      num_registers_(num_registers),
      initial_(initial),
      accepting_(std::move(accepting)),
      transitions_(std::move(transitions)) {
  if (num_states_ < 1) throw InvalidArgument("an RAA needs at least one state");
  if (initial_ < 0 || initial_ >= num_states_) throw InvalidArgument("initial state out of range");
  if (accepting_.size() != static_cast<std::size_t>(num_states_))
    throw InvalidArgument("accepting set size differs from state count");
  out_.assign(static_cast<std::size_t>(num_states_), {});
  auto check = [&](const Operand& o, const std::string& where) {
    if (o.kind == OperandKind::Curr) throw InvalidArgument(where + ": single-head letter in an RAA");
    if (o.kind == OperandKind::Reg && (o.index < 0 || o.index >= num_registers_))
      throw InvalidArgument(where + ": register index out of range");
  };
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    std::string where = "transition " + std::to_string(i);
    if (t.from < 0 || t.from >= num_states_ || t.to < 0 || t.to >= num_states_)
      throw InvalidArgument(where + ": state out of range");
    for (const auto& a : t.guard) {
      check(a.lhs, where);
      check(a.rhs, where);
    }
    std::vector<bool> seen(static_cast<std::size_t>(num_registers_), false);
    for (const auto& u : t.assign) {
      if (u.target < 0 || u.target >= num_registers_)
        throw InvalidArgument(where + ": assignment target out of range");
      if (seen[static_cast<std::size_t>(u.target)]) throw InvalidArgument(where + ": register assigned twice");
      seen[static_cast<std::size_t>(u.target)] = true;
      check(u.src, where);
    }
    out_[static_cast<std::size_t>(t.from)].push_back(static_cast<int>(i));
  }
}

bool operator==(const Raa& a, const Raa& b) {
  return a.num_states_ == b.num_states_ && a.num_registers_ == b.num_registers_ &&
         a.initial_ == b.initial_ && a.accepting_ == b.accepting_ &&
         a.transitions_ == b.transitions_;
}

namespace {

struct Compiled {
  const RaaTransition* t;
  bool need1;
  bool need2;
  int d1;
  int d2;
};

std::vector<Compiled> compile(const Raa& raa) {
  std::vector<Compiled> c;
  c.reserve(raa.transitions().size());
  for (const auto& t : raa.transitions())
    c.push_back({&t, needs_head1(t), needs_head2(t), moves_head1(t.mov) ? 1 : 0,
                 moves_head2(t.mov) ? 1 : 0});
  return c;
}

// increment, or false if negative
bool increment(const AccUpdate& acc, const Rational* c1, const Rational* c2, Rational& out) {
  out = acc.b;
  if (acc.a1.sign() != 0) out += acc.a1 * *c1;
  if (acc.a2.sign() != 0) out += acc.a2 * *c2;
  return out.sign() >= 0;
}

ExtendedCost evaluate_registerless(const Raa& raa, std::span<const Rational> v,
                                   std::span<const Rational> w) {
  const std::size_t m = v.size(), n = w.size();
  const std::size_t Q = static_cast<std::size_t>(raa.num_states());
  const std::size_t W = n + 1, H = (m + 1) * W;
  thread_local std::vector<Rational> dist;
  thread_local std::vector<char> reached;
  dist.resize(Q * H);
  reached.assign(Q * H, 0);
  auto idx = [&](std::size_t q, std::size_t i, std::size_t j) { return q * H + i * W + j; };
  auto comp = compile(raa);
  reached[idx(static_cast<std::size_t>(raa.initial()), 0, 0)] = 1;
  dist[idx(static_cast<std::size_t>(raa.initial()), 0, 0)] = Rational(0);
  Rational inc;
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = 0; j <= n; ++j) {
      const Rational* c1 = i < m ? &v[i] : nullptr;
      const Rational* c2 = j < n ? &w[j] : nullptr;
      Env env{nullptr, nullptr, c1, c2};
      for (std::size_t q = 0; q < Q; ++q) {
        std::size_t here = idx(q, i, j);
        if (!reached[here]) continue;
        for (int ti : raa.outgoing(static_cast<int>(q))) {
          const auto& c = comp[static_cast<std::size_t>(ti)];
          if ((c.need1 && !c1) || (c.need2 && !c2)) continue;
          if (!holds(c.t->guard, env)) continue;
          if (!increment(c.t->acc, c1, c2, inc)) continue;
          inc += dist[here];
          std::size_t there = idx(static_cast<std::size_t>(c.t->to), i + static_cast<std::size_t>(c.d1),
                                  j + static_cast<std::size_t>(c.d2));
          if (!reached[there] || inc < dist[there]) {
            reached[there] = 1;
            dist[there] = inc;
          }
        }
      }
    }
  std::optional<Rational> best;
  for (std::size_t q = 0; q < Q; ++q) {
    if (!raa.accepting(static_cast<int>(q))) continue;
    std::size_t f = idx(q, m, n);
    if (reached[f] && (!best || dist[f] < *best)) best = dist[f];
  }
  return best ? ExtendedCost(*best) : ExtendedCost::infinity();
}

struct ConfKey {
  int state;
  int h1;
  int h2;
  std::vector<Rational> regs;
  friend auto operator<=>(const ConfKey&, const ConfKey&) = default;
};

ExtendedCost evaluate_general(const Raa& raa, std::span<const Rational> v,
                              std::span<const Rational> w) {
  const int m = static_cast<int>(v.size()), n = static_cast<int>(w.size());
  auto comp = compile(raa);
  std::map<ConfKey, Rational> best;
  using Item = std::pair<Rational, ConfKey>;
  auto cmp = [](const Item& a, const Item& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
  ConfKey start{raa.initial(), 0, 0, std::vector<Rational>(static_cast<std::size_t>(raa.num_registers()))};
  best[start] = Rational(0);
  pq.push({Rational(0), start});
  std::vector<Rational> next(static_cast<std::size_t>(raa.num_registers()));
  Rational inc;
  while (!pq.empty()) {
    auto [d, key] = pq.top();
    pq.pop();
    auto it = best.find(key);
    if (it == best.end() || it->second < d) continue;
    if (raa.accepting(key.state) && key.h1 == m && key.h2 == n) return ExtendedCost(d);
    const Rational* c1 = key.h1 < m ? &v[static_cast<std::size_t>(key.h1)] : nullptr;
    const Rational* c2 = key.h2 < n ? &w[static_cast<std::size_t>(key.h2)] : nullptr;
    Env env{key.regs.data(), nullptr, c1, c2};
    for (int ti : raa.outgoing(key.state)) {
      const auto& c = comp[static_cast<std::size_t>(ti)];
      if ((c.need1 && !c1) || (c.need2 && !c2)) continue;
      if (!holds(c.t->guard, env)) continue;
      if (!increment(c.t->acc, c1, c2, inc)) continue;
      apply(c.t->assign, env, key.regs, next);
      ConfKey nk{c.t->to, key.h1 + c.d1, key.h2 + c.d2, next};
      Rational nd = d + inc;
      auto [pos, fresh] = best.try_emplace(nk, nd);
      if (!fresh) {
        if (!(nd < pos->second)) continue;
        pos->second = nd;
      }
      pq.push({nd, std::move(nk)});
    }
  }
  return ExtendedCost::infinity();
}

}  // namespace

ExtendedCost evaluate(const Raa& raa, std::span<const Rational> v, std::span<const Rational> w) {
  if (raa.num_registers() == 0) return evaluate_registerless(raa, v, w);
  return evaluate_general(raa, v, w);
}

Raa split_disequalities(const Raa& raa) {
  std::vector<RaaTransition> ts;
  const int k = raa.num_registers();
  for (const auto& t : raa.transitions()) {
    if (!has_disequality(t.guard)) {
      ts.push_back(t);
      continue;
    }
    for (auto& g : split_guard(t.guard)) {
      bool sat = true;
      try {
        sat = guard_satisfiable(g, k);
      } catch (const InvalidArgument&) {
        // offset atoms between two letters: keep the guard
      }
      if (!sat) continue;
      RaaTransition u = t;
      u.guard = std::move(g);
      ts.push_back(std::move(u));
    }
  }
  return Raa(raa.num_states(), k, raa.initial(), raa.accepting_set(), std::move(ts));
}

}  // namespace regrobust
