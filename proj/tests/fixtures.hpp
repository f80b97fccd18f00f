#pragma once

// Test-local automata and sequence helpers, built by hand so they do not
// depend on the benchmark catalogue.

#include <random>
#include <vector>

#include "regrobust/automata.hpp"

namespace fx {

using namespace regrobust;

inline GuardAtom at(Operand l, Cmp op, Operand r) { return {std::move(l), op, std::move(r), Rational(0)}; }
inline Operand R(int i) { return Operand::reg(i); }
inline Operand C() { return Operand::curr(); }
inline Operand K(std::int64_t v) { return Operand::constant(Rational(v)); }

inline Sequence seq(std::initializer_list<std::int64_t> xs) {
  Sequence s;
  for (auto x : xs) s.emplace_back(x);
  return s;
}

// The three-register running example: a strict rise, a dip, then a
// zig-zag phase that must stay above the first minimum.
inline Dra fig3() {
  std::vector<Transition> ts{
      {0, {at(R(0), Cmp::Ge, C())}, {{0, C()}}, 0},
      {0, {at(R(0), Cmp::Lt, C())}, {{1, C()}}, 1},
      {1, {at(R(1), Cmp::Le, C())}, {{1, C()}}, 1},
      {1, {at(R(1), Cmp::Gt, C()), at(R(0), Cmp::Lt, C())}, {{2, C()}}, 2},
      {2, {at(R(2), Cmp::Ge, C()), at(R(0), Cmp::Lt, C())}, {{2, C()}}, 2},
      {2, {at(R(2), Cmp::Lt, C())}, {{0, R(2)}, {2, C()}}, 3},
      {3, {at(R(2), Cmp::Le, C())}, {{2, C()}}, 3},
      {3, {at(R(2), Cmp::Gt, C()), at(R(1), Cmp::Lt, R(2))}, {{1, R(2)}, {2, C()}}, 2},
  };
  return Dra(4, 3, 0, {false, true, true, true}, std::move(ts));
}

// Random deterministic DRA: every state partitions the letter line around
// one pivot (a register or a constant in 0..3) into <, =, > parts; parts may
// be merged, turned into a disequality, or dropped (run-death).
inline Dra random_dra(std::mt19937_64& rng, int max_states = 3, int max_regs = 2) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n = pick(1, max_states);
  const int k = pick(0, max_regs);
  std::vector<bool> acc(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) acc[static_cast<std::size_t>(q)] = pick(0, 1) == 1;
  if (std::none_of(acc.begin(), acc.end(), [](bool b) { return b; })) acc[static_cast<std::size_t>(pick(0, n - 1))] = true;
  auto rand_assign = [&] {
    Assignment as;
    for (int r = 0; r < k; ++r) {
      int c = pick(0, 5);
      if (c <= 1) as.push_back({r, C()});
      else if (c == 2) as.push_back({r, K(pick(0, 3))});
      else if (c == 3 && k > 1) as.push_back({r, R((r + 1) % k)});
    }
    return as;
  };
  std::vector<Transition> ts;
  for (int q = 0; q < n; ++q) {
    Operand pivot = (k > 0 && pick(0, 2) > 0) ? R(pick(0, k - 1)) : K(pick(0, 3));
    auto emit = [&](Guard g) {
      if (pick(0, 7) == 0) return;  // dropped part
      ts.push_back({q, std::move(g), rand_assign(), pick(0, n - 1)});
    };
    switch (pick(0, 4)) {
      case 0:
        emit({at(C(), Cmp::Lt, pivot)});
        emit({at(C(), Cmp::Eq, pivot)});
        emit({at(C(), Cmp::Gt, pivot)});
        break;
      case 1:
        emit({at(C(), Cmp::Le, pivot)});
        emit({at(C(), Cmp::Gt, pivot)});
        break;
      case 2:
        emit({at(pivot, Cmp::Gt, C())});
        emit({at(pivot, Cmp::Le, C())});
        break;
      case 3:
        emit({at(C(), Cmp::Ne, pivot)});
        emit({at(C(), Cmp::Eq, pivot)});
        break;
      default:
        emit({});
        break;
    }
  }
  return Dra(n, k, 0, std::move(acc), std::move(ts));
}

// All sequences of length 0..max_len over the given letters.
template <class F>
void for_each_sequence(const std::vector<Rational>& letters, int max_len, F&& f) {
  Sequence s;
  auto rec = [&](auto&& self, int len) -> void {
    f(static_cast<const Sequence&>(s));
    if (len == max_len) return;
    for (const auto& x : letters) {
      s.push_back(x);
      self(self, len + 1);
      s.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace fx
