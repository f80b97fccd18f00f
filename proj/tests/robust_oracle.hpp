#pragma once

// Brute-force reference for the flip-cost infimum of length-preserving
// metrics (hamming, manhattan, last_letter). Candidate sequences are
// enumerated letter by letter as pairs (s, o) meaning s + o*eps: s ranges
// over 0, the automaton constants, the letters of v and one point beyond
// each end; o is an existing offset at s, a midpoint between two of them, or
// one step beyond. The automaton is interpreted directly on these pairs, so
// strict guards are honoured exactly while costs use standard parts.

#include <algorithm>
#include <optional>
#include <vector>

#include "regrobust/automata.hpp"

namespace oracle {

using regrobust::Cmp;
using regrobust::Dra;
using regrobust::Operand;
using regrobust::OperandKind;
using regrobust::Rational;
using regrobust::Sequence;

struct HP {
  Rational s;
  Rational o;
  friend bool operator==(const HP&, const HP&) = default;
  friend auto operator<=>(const HP& a, const HP& b) {
    if (auto c = a.s <=> b.s; c != 0) return c;
    return a.o <=> b.o;
  }
};

enum class LenMetric { Hamming, Manhattan, LastLetter };

struct FlipSearch {
  const Dra& dra;
  const Sequence& v;
  LenMetric metric;
  bool want_accept;  // label the flipped sequence must get
  std::vector<Rational> stds;
  std::optional<Rational> best;
  std::vector<HP> w;

  FlipSearch(const Dra& d, const Sequence& v_, LenMetric m, bool want)
      : dra(d), v(v_), metric(m), want_accept(want) {
    stds.push_back(Rational(0));
    for (const auto& t : dra.transitions()) {
      for (const auto& a : t.guard)
        for (const Operand* o : {&a.lhs, &a.rhs})
          if (o->is_const()) stds.push_back(o->value);
      for (const auto& u : t.assign)
        if (u.src.is_const()) stds.push_back(u.src.value);
    }
    for (const auto& x : v) stds.push_back(x);
    std::sort(stds.begin(), stds.end());
    stds.erase(std::unique(stds.begin(), stds.end()), stds.end());
    Rational lo = stds.front() - Rational(1), hi = stds.back() + Rational(1);
    stds.push_back(lo);
    stds.push_back(hi);
  }

  static bool cmp(const HP& a, Cmp op, const HP& b) {
    auto c = a <=> b;
    switch (op) {
      case Cmp::Lt: return c < 0;
      case Cmp::Le: return c <= 0;
      case Cmp::Eq: return c == 0;
      case Cmp::Ne: return c != 0;
      case Cmp::Gt: return c > 0;
      case Cmp::Ge: return c >= 0;
    }
    return false;
  }

  HP val(const Operand& o, const std::vector<HP>& regs, const HP& cur) const {
    if (o.kind == OperandKind::Reg) return regs[static_cast<std::size_t>(o.index)];
    if (o.kind == OperandKind::Curr) return cur;
    return {o.value, Rational(0)};
  }

  // -1: run death; otherwise the new state (regs updated).
  int step(int q, std::vector<HP>& regs, const HP& cur) const {
    int found = -1;
    const regrobust::Transition* fired = nullptr;
    for (int ti : dra.outgoing(q)) {
      const auto& t = dra.transitions()[static_cast<std::size_t>(ti)];
      bool ok = true;
      for (const auto& a : t.guard)
        if (!cmp(val(a.lhs, regs, cur), a.op, val(a.rhs, regs, cur))) ok = false;
      if (ok) {
        found = t.to;
        fired = &t;
        break;
      }
    }
    if (!fired) return -1;
    std::vector<HP> next = regs;
    for (const auto& u : fired->assign) next[static_cast<std::size_t>(u.target)] = val(u.src, regs, cur);
    regs = std::move(next);
    return found;
  }

  Rational letter_cost(std::size_t i, const HP& x) const {
    HP vi{v[i], Rational(0)};
    switch (metric) {
      case LenMetric::Hamming: return x == vi ? Rational(0) : Rational(1);
      case LenMetric::Manhattan: {
        Rational d = x.s - v[i];
        return d.sign() < 0 ? -d : d;
      }
      case LenMetric::LastLetter: {
        Rational d = x.s - v[i];
        return d.sign() < 0 ? -d : d;
      }
    }
    return Rational(0);
  }

  std::vector<HP> candidates(std::size_t i) const {
    if (metric == LenMetric::LastLetter && i + 1 < v.size()) return {HP{v[i], Rational(0)}};
    std::vector<HP> out;
    for (const auto& s : stds) {
      std::vector<Rational> offs{Rational(0)};
      for (const auto& x : w)
        if (x.s == s) offs.push_back(x.o);
      std::sort(offs.begin(), offs.end());
      offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
      out.push_back({s, offs.front() - Rational(1)});
      for (std::size_t j = 0; j < offs.size(); ++j) {
        out.push_back({s, offs[j]});
        if (j + 1 < offs.size()) out.push_back({s, (offs[j] + offs[j + 1]) / Rational(2)});
      }
      out.push_back({s, offs.back() + Rational(1)});
    }
    return out;
  }

  void record(const Rational& c) {
    if (!best || c < *best) best = c;
  }

  void dfs(std::size_t i, int q, const std::vector<HP>& regs, const Rational& cost) {
    if (best && !(cost < *best)) return;
    if (i == v.size()) {
      if (dra.accepting(q) == want_accept) record(cost);
      return;
    }
    for (const HP& x : candidates(i)) {
      Rational c = cost + letter_cost(i, x);
      if (best && !(c < *best)) continue;
      std::vector<HP> r = regs;
      int nq = step(q, r, x);
      if (nq < 0) {
        // dead: rejected whatever follows; the rest can copy v at no cost
        if (!want_accept) record(c);
        continue;
      }
      w.push_back(x);
      dfs(i + 1, nq, r, c);
      w.pop_back();
    }
  }

  std::optional<Rational> run() {
    std::vector<HP> regs(static_cast<std::size_t>(dra.num_registers()), HP{Rational(0), Rational(0)});
    dfs(0, dra.initial(), regs, Rational(0));
    return best;
  }
};

// Plain real-valued grid search: letters from the constants, v and the
// midpoints of consecutive values. Its minimum can only be larger than or
// equal to the infimum.
inline std::optional<Rational> grid_flip_cost(const Dra& dra, const Sequence& v, LenMetric metric,
                                              bool want_accept) {
  FlipSearch fs(dra, v, metric, want_accept);
  std::vector<Rational> g = fs.stds;
  std::sort(g.begin(), g.end());
  std::vector<Rational> grid = g;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) grid.push_back((g[i] + g[i + 1]) / Rational(2));
  std::optional<Rational> best;
  Sequence w(v.size());
  auto rec = [&](auto&& self, std::size_t i, Rational cost) -> void {
    if (best && !(cost < *best)) return;
    if (i == v.size()) {
      if (regrobust::accepts(dra, w) == want_accept) best = cost;
      return;
    }
    const std::vector<Rational>& letters =
        (metric == LenMetric::LastLetter && i + 1 < v.size()) ? std::vector<Rational>{v[i]} : grid;
    for (const auto& x : letters) {
      w[i] = x;
      self(self, i + 1, cost + fs.letter_cost(i, HP{x, Rational(0)}));
    }
  };
  rec(rec, 0, Rational(0));
  return best;
}

}  // namespace oracle
