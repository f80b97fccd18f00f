#include "regrobust/benchmarks.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "regrobust/dra_ops.hpp"
#include "regrobust/errors.hpp"
#include "regrobust/serialize.hpp"

namespace regrobust {

namespace {

GuardAtom at(Operand l, Cmp op, Operand r) { return {std::move(l), op, std::move(r), {}}; }
Operand R(int i) { return Operand::reg(i); }
Operand C() { return Operand::curr(); }
Operand K(std::int64_t v) { return Operand::constant(Rational(v)); }

struct Info {
  BenchmarkId id;
  const char* name;
  const char* description;
};

const Info kInfo[] = {
    {BenchmarkId::L1, "L1", "a*"},
    {BenchmarkId::L2, "L2", "(ab)*"},
    {BenchmarkId::L3, "L3", "a^n b^m, n odd, m even"},
    {BenchmarkId::L4, "L4", "no symbol repeated three times consecutively"},
    {BenchmarkId::L5, "L5", "a(a|b)* with even counts of a and of b"},
    {BenchmarkId::L6, "L6", "a(a|b)* with count_a = count_b (mod 3)"},
    {BenchmarkId::L7, "L7", "a+ b* a* b*"},
    {BenchmarkId::S1, "S1", "strictly increasing"},
    {BenchmarkId::S2, "S2", "strictly decreasing"},
    {BenchmarkId::S3, "S3", "non-strictly decreasing"},
    {BenchmarkId::S4, "S4", "non-strictly increasing"},
    {BenchmarkId::S5, "S5", "single peak"},
    {BenchmarkId::S6, "S6", "single valley"},
    {BenchmarkId::S7, "S7", "two peaks"},
    {BenchmarkId::S8, "S8", "three peaks"},
    {BenchmarkId::S9, "S9", "higher highs and higher lows"},
    {BenchmarkId::S10, "S10", "higher highs and lower lows"},
    {BenchmarkId::S11, "S11", "lower highs and lower lows"},
};

const Info& info(BenchmarkId id) { return kInfo[static_cast<std::size_t>(id)]; }

// Two-letter DFA, letter 0 = a, letter 1 = b.
struct Dfa {
  int start = 0;
  std::vector<std::array<int, 2>> delta;
  std::vector<bool> accepting;
  bool sink(int s) const {
    auto u = static_cast<std::size_t>(s);
    return !accepting[u] && delta[u][0] == s && delta[u][1] == s;
  }
};

// Registers: r0 = a, r1 = b. Phases: 0 before the first letter, 1 with only
// a bound, 2 with both bound. Moves into a DFA sink become run-death.
Dra symbolic(const Dfa& d) {
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> todo;
  std::vector<bool> acc;
  std::vector<Transition> ts;
  auto get = [&](int phase, int s) {
    auto [it, fresh] = id.try_emplace({phase, s}, static_cast<int>(acc.size()));
    if (fresh) {
      acc.push_back(d.accepting[static_cast<std::size_t>(s)]);
      todo.push_back({phase, s});
    }
    return it->second;
  };
  get(0, d.start);
  for (std::size_t i = 0; i < todo.size(); ++i) {
    auto [phase, s] = todo[i];
    const int from = static_cast<int>(i);
    const auto& ds = d.delta[static_cast<std::size_t>(s)];
    auto add = [&](Guard g, Assignment u, int next_phase, int t) {
      if (!d.sink(t)) ts.push_back({from, std::move(g), std::move(u), get(next_phase, t)});
    };
    if (phase == 0) {
      add({}, {{0, C()}}, 1, ds[0]);
    } else if (phase == 1) {
      add({at(C(), Cmp::Eq, R(0))}, {}, 1, ds[0]);
      add({at(C(), Cmp::Gt, R(0))}, {{1, C()}}, 2, ds[1]);
    } else {
      add({at(C(), Cmp::Eq, R(0))}, {}, 2, ds[0]);
      add({at(C(), Cmp::Eq, R(1)), at(R(0), Cmp::Lt, R(1))}, {}, 2, ds[1]);
    }
  }
  const int n = static_cast<int>(acc.size());
  return Dra(n, 2, 0, std::move(acc), std::move(ts));
}

Dfa tomita(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::L2:  // 0 start, 1 after a, 2 sink
      return {0, {{1, 2}, {2, 0}, {2, 2}}, {true, false, false}};
    case BenchmarkId::L3:  // 1 odd a's, 2 even a's, 3 odd b's, 4 even b's, 5 sink
      return {0, {{1, 5}, {2, 3}, {1, 5}, {5, 4}, {5, 3}, {5, 5}}, {false, true, false, false, true, false}};
    case BenchmarkId::L4:  // 1 a, 2 aa, 3 b, 4 bb, 5 sink
      return {0, {{1, 3}, {2, 3}, {5, 3}, {1, 4}, {1, 5}, {5, 5}}, {true, true, true, true, true, false}};
    case BenchmarkId::L5: {  // 1 + parity(a) + 2 parity(b), 5 sink
      Dfa d{0, {{2, 5}}, {false}};
      for (int pb = 0; pb < 2; ++pb)
        for (int pa = 0; pa < 2; ++pa) {
          d.delta.push_back({1 + (1 - pa) + 2 * pb, 1 + pa + 2 * (1 - pb)});
          d.accepting.push_back(pa == 0 && pb == 0);
        }
      d.delta.push_back({5, 5});
      d.accepting.push_back(false);
      return d;
    }
    case BenchmarkId::L6: {  // 1 + (count_a - count_b) mod 3, 4 sink
      Dfa d{0, {{2, 4}}, {false}};
      for (int r = 0; r < 3; ++r) {
        d.delta.push_back({1 + (r + 1) % 3, 1 + (r + 2) % 3});
        d.accepting.push_back(r == 0);
      }
      d.delta.push_back({4, 4});
      d.accepting.push_back(false);
      return d;
    }
    case BenchmarkId::L7:  // 1 a+, 2 b*, 3 a*, 4 b*, 5 sink
      return {0, {{1, 5}, {1, 2}, {3, 2}, {3, 4}, {5, 4}, {5, 5}}, {false, true, true, true, true, false}};
    default:
      throw InvalidArgument("not a Tomita language");
  }
}

Dra monotone(Cmp op) {
  return Dra(2, 1, 0, {true, true}, {{0, {}, {{0, C()}}, 1}, {1, {at(R(0), op, C())}, {{0, C()}}, 1}});
}

// Runs of strict rises (+) and falls (-) in the given order; equal
// neighbours kill the run. Accepts once the last run has started.
Dra runs(const std::string& pattern) {
  const int p = static_cast<int>(pattern.size());
  auto dir = [&](int j) { return pattern[static_cast<std::size_t>(j)] == '+' ? Cmp::Lt : Cmp::Gt; };
  std::vector<Transition> ts{{0, {}, {{0, C()}}, 1}};
  ts.push_back({1, {at(R(0), dir(0), C())}, {{0, C()}}, 2});
  for (int j = 1; j <= p; ++j) {
    ts.push_back({1 + j, {at(R(0), dir(j - 1), C())}, {{0, C()}}, 1 + j});
    if (j < p) ts.push_back({1 + j, {at(R(0), dir(j), C())}, {{0, C()}}, 2 + j});
  }
  std::vector<bool> acc(static_cast<std::size_t>(p + 2), false);
  acc.back() = true;
  return Dra(p + 2, 1, 0, std::move(acc), std::move(ts));
}

// Registers: r0 last low, r1 last high, r2 current extreme.
Dra higher_highs_higher_lows() {
  return Dra(4, 3, 0, {false, true, true, true},
             {
                 {0, {at(R(0), Cmp::Ge, C())}, {{0, C()}}, 0},
                 {0, {at(R(0), Cmp::Lt, C())}, {{1, C()}}, 1},
                 {1, {at(R(1), Cmp::Le, C())}, {{1, C()}}, 1},
                 {1, {at(R(1), Cmp::Gt, C()), at(R(0), Cmp::Lt, C())}, {{2, C()}}, 2},
                 {2, {at(R(2), Cmp::Ge, C()), at(R(0), Cmp::Lt, C())}, {{2, C()}}, 2},
                 {2, {at(R(2), Cmp::Lt, C())}, {{0, R(2)}, {2, C()}}, 3},
                 {3, {at(R(2), Cmp::Le, C())}, {{2, C()}}, 3},
                 {3, {at(R(2), Cmp::Gt, C()), at(R(1), Cmp::Lt, R(2))}, {{1, R(2)}, {2, C()}}, 2},
             });
}

// Same register discipline; a trough must undercut the last low when the
// price turns up, a peak must exceed the last high when it turns down.
Dra higher_highs_lower_lows() {
  return Dra(4, 3, 0, {false, true, true, true},
             {
                 {0, {at(R(0), Cmp::Ge, C())}, {{0, C()}}, 0},
                 {0, {at(R(0), Cmp::Lt, C())}, {{1, C()}}, 1},
                 {1, {at(R(1), Cmp::Le, C())}, {{1, C()}}, 1},
                 {1, {at(R(1), Cmp::Gt, C())}, {{2, C()}}, 2},
                 {2, {at(R(2), Cmp::Ge, C())}, {{2, C()}}, 2},
                 {2, {at(R(2), Cmp::Lt, C()), at(R(2), Cmp::Lt, R(0))}, {{0, R(2)}, {2, C()}}, 3},
                 {3, {at(R(2), Cmp::Le, C())}, {{2, C()}}, 3},
                 {3, {at(R(2), Cmp::Gt, C()), at(R(1), Cmp::Lt, R(2))}, {{1, R(2)}, {2, C()}}, 2},
             });
}

Cmp flip(Cmp c) {
  switch (c) {
    case Cmp::Lt: return Cmp::Gt;
    case Cmp::Le: return Cmp::Ge;
    case Cmp::Gt: return Cmp::Lt;
    case Cmp::Ge: return Cmp::Le;
    default: return c;
  }
}

// Accepts w iff the input accepts -w.
Dra negated(const Dra& a) {
  auto neg = [](Operand o) {
    if (o.is_const()) o.value = -o.value;
    return o;
  };
  std::vector<Transition> ts = a.transitions();
  for (auto& t : ts) {
    for (auto& g : t.guard) g = {neg(g.lhs), flip(g.op), neg(g.rhs), -g.offset};
    for (auto& u : t.assign) u.src = neg(u.src);
  }
  return Dra(a.num_states(), a.num_registers(), a.initial(), a.accepting_set(), std::move(ts));
}

Sequence s(std::initializer_list<Rational> xs) { return Sequence(xs); }
Rational q(std::int64_t n, std::int64_t d) { return Rational(n, d); }

}  // namespace

const std::vector<BenchmarkId>& all_benchmarks() {
  static const std::vector<BenchmarkId> ids = [] {
    std::vector<BenchmarkId> v;
    for (const auto& i : kInfo) v.push_back(i.id);
    return v;
  }();
  return ids;
}

std::string benchmark_name(BenchmarkId id) { return info(id).name; }
std::string benchmark_description(BenchmarkId id) { return info(id).description; }

BenchmarkId parse_benchmark(const std::string& name) {
  for (const auto& i : kInfo)
    if (name == i.name) return i.id;
  throw InvalidArgument("unknown benchmark '" + name + "' (expected L1..L7 or S1..S11)");
}

Dra ground_truth(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::L1:
      return Dra(2, 1, 0, {true, true},
                 {{0, {at(K(0), Cmp::Le, C()), at(C(), Cmp::Le, K(5))}, {{0, C()}}, 1},
                  {1, {at(R(0), Cmp::Eq, C())}, {}, 1}});
    case BenchmarkId::S1: return monotone(Cmp::Lt);
    case BenchmarkId::S2: return monotone(Cmp::Gt);
    case BenchmarkId::S3: return monotone(Cmp::Ge);
    case BenchmarkId::S4: return monotone(Cmp::Le);
    case BenchmarkId::S5: return runs("+-");
    case BenchmarkId::S6: return runs("-+");
    case BenchmarkId::S7: return runs("+-+-");
    case BenchmarkId::S8: return runs("+-+-+-");
    case BenchmarkId::S9: return higher_highs_higher_lows();
    case BenchmarkId::S10: return higher_highs_lower_lows();
    case BenchmarkId::S11: return negated(higher_highs_higher_lows());
    default: return symbolic(tomita(id));
  }
}

std::vector<LabelledExample> hand_examples(BenchmarkId id) {
  using E = LabelledExample;
  switch (id) {
    case BenchmarkId::L1:
      return {E{s({2, 2, 2}), true}, E{s({2, 3}), false}, E{s({0}), true}, E{s({5, 5}), true},
              E{s({6}), false}, E{s({-1}), false}, E{s({q(5, 2), q(5, 2)}), true},
              E{s({1, 1, 1, 2}), false}, E{s({3}), true}, E{s({q(11, 2)}), false}};
    case BenchmarkId::L2:
      return {E{s({1, 2}), true}, E{s({1, 2, 1, 2}), true}, E{s({1}), false}, E{s({1, 2, 1}), false},
              E{s({2, 1}), false}, E{s({1, 1}), false}, E{s({1, 3, 1, 3}), true},
              E{s({1, 2, 1, 3}), false}, E{s({-1, q(7, 2)}), true}, E{s({1, 2, 2}), false}};
    case BenchmarkId::L3:
      return {E{s({1}), true}, E{s({1, 1}), false}, E{s({1, 1, 1}), true}, E{s({1, 2, 2}), true},
              E{s({1, 2}), false}, E{s({1, 1, 2, 2}), false}, E{s({1, 1, 1, 2, 2, 2, 2}), true},
              E{s({1, 2, 2, 1}), false}, E{s({2, 5, 5}), true}, E{s({1, 2, 2, 2}), false}};
    case BenchmarkId::L4:
      return {E{s({1, 1}), true}, E{s({1, 1, 1}), false}, E{s({1, 2, 2, 1, 1, 2}), true},
              E{s({1, 2, 2, 2}), false}, E{s({1}), true}, E{s({2, 1}), false},
              E{s({1, 2, 1, 2, 1}), true}, E{s({1, 1, 2, 2, 1, 1, 1}), false}, E{s({1, 3, 2}), false},
              E{s({0, 0, 9, 0, 9, 9}), true}};
    case BenchmarkId::L5:
      return {E{s({1, 1}), true}, E{s({1}), false}, E{s({1, 2, 2, 1}), true}, E{s({1, 2, 1, 2}), true},
              E{s({1, 2}), false}, E{s({1, 1, 2}), false}, E{s({1, 2, 2, 2, 2, 1}), true},
              E{s({1, 1, 1, 1}), true}, E{s({1, 2, 2}), false}, E{s({1, 2, 1}), false}};
    case BenchmarkId::L6:
      return {E{s({1, 2}), true}, E{s({1}), false}, E{s({1, 1, 1}), true}, E{s({1, 2, 1, 2}), true},
              E{s({1, 1, 2}), false}, E{s({1, 1, 1, 1, 2}), true}, E{s({1, 2, 2, 2, 1}), false},
              E{s({1, 1, 2, 2}), true}, E{s({1, 2, 2}), false}, E{s({1, 1, 1, 2, 2, 2}), true}};
    case BenchmarkId::L7:
      return {E{s({1}), true}, E{s({1, 2}), true}, E{s({1, 2, 1}), true}, E{s({1, 2, 1, 2}), true},
              E{s({1, 2, 1, 2, 1}), false}, E{s({1, 1, 2, 2, 1, 1, 2, 2}), true},
              E{s({1, 2, 1, 2, 2, 1}), false}, E{s({2, 1}), false}, E{s({1, 1, 1}), true},
              E{s({1, 2, 3}), false}};
    case BenchmarkId::S1:
      return {E{s({1, 2, 3}), true}, E{s({2, 1}), false}, E{s({1}), true}, E{s({1, 1}), false},
              E{s({-3, q(-1, 2), 0, 7}), true}, E{s({1, 2, 2}), false}};
    case BenchmarkId::S2:
      return {E{s({3, 2, 1}), true}, E{s({1, 2}), false}, E{s({5}), true}, E{s({2, 2}), false},
              E{s({0, q(-1, 3), -1}), true}};
    case BenchmarkId::S3:
      return {E{s({3, 3, 1}), true}, E{s({1, 2}), false}, E{s({0, 0, 0}), true}, E{s({2, 1, 2}), false},
              E{s({4}), true}};
    case BenchmarkId::S4:
      return {E{s({1, 1, 2}), true}, E{s({2, 1}), false}, E{s({0, 0}), true}, E{s({1, 2, 1}), false},
              E{s({7}), true}};
    case BenchmarkId::S5:
      return {E{s({1, 2, 1}), true}, E{s({1, 2, 3, 2, 1}), true}, E{s({1, 2, 3}), false},
              E{s({3, 2, 1}), false}, E{s({1}), false}, E{s({1, 1, 0}), false}, E{s({1, 2, 2, 1}), false},
              E{s({1, 2, 1, 2}), false}, E{s({0, 5, -5}), true}, E{s({q(1, 2), q(3, 4), q(1, 3)}), true},
              E{s({1, 2, 1, 0, -1}), true}};
    case BenchmarkId::S6:
      return {E{s({2, 1, 2}), true}, E{s({3, 2, 1, 2, 3}), true}, E{s({3, 2, 1}), false},
              E{s({1, 2, 3}), false}, E{s({5}), false}, E{s({2, 1, 1, 2}), false},
              E{s({2, 1, 2, 1}), false}, E{s({0, -5, 5}), true}, E{s({1, 0, 1, 2, 10}), true},
              E{s({2, 1, 2, 3, 2}), false}};
    case BenchmarkId::S7:
      return {E{s({1, 2, 1, 2, 1}), true}, E{s({0, 3, 1, 4, 2}), true}, E{s({1, 2, 1}), false},
              E{s({1, 2, 1, 2}), false}, E{s({1, 2, 1, 2, 1, 2, 1}), false},
              E{s({1, 2, 3, 2, 3, 4, 0}), true}, E{s({1, 2, 2, 1, 2, 1}), false},
              E{s({2, 1, 2, 1, 2, 1}), false}, E{s({1, 2, 1, 2, 1, 0, -1}), true}, E{s({5}), false}};
    case BenchmarkId::S8:
      return {E{s({1, 2, 1, 2, 1, 2, 1}), true}, E{s({1, 2, 1, 2, 1}), false},
              E{s({1, 2, 1, 2, 1, 2}), false}, E{s({0, 1, 0, 1, 0, 1, 0, -1}), true},
              E{s({1, 2, 1, 2, 1, 2, 1, 2, 1}), false}, E{s({1, 3, 2, 4, 3, 5, 4}), true},
              E{s({1, 2, 1, 2, 2, 1, 2, 1}), false}, E{s({3, 2, 3, 2, 3, 2, 3, 2}), false},
              E{s({1}), false}, E{s({1, 2, 1, 2, 1, 2, 1, 2}), false}};
    case BenchmarkId::S9:
      return {E{s({0, -1, 5, 3, 7, 9, 6, 8}), true}, E{s({0, -1, 5, 3, 7, 9, 6, 3}), false},
              E{s({0}), false}, E{s({1}), true}, E{s({-1, -2}), false}, E{s({1, 0}), false},
              E{s({1, 2, 1}), true}, E{s({1, 3, 2, 4, 3, 5}), true}, E{s({1, 3, 2, 4, 2}), true},
              E{s({1, 3, 2, 4, 2, 1}), false}, E{s({2, 1, 3}), true}};
    case BenchmarkId::S10:
      return {E{s({0, -1, 5, 3, 7, 9, 6, 8}), false}, E{s({0, -2, 4, -3, 6, -5, 8}), true},
              E{s({0}), false}, E{s({1}), true}, E{s({1, 2, 3}), true}, E{s({1, 0}), true},
              E{s({0, -1, 2, 1, 3}), false}, E{s({-1, 3, -2, 4}), true}, E{s({-1, 3, -2, 2, 1}), false},
              E{s({-1, 3, -2, 4, -3}), true}, E{s({0, 0, 0}), false}, E{s({2, 5, 5, 1}), true}};
    case BenchmarkId::S11:
      return {E{s({0, 1, -5, -3, -7, -9, -6, -8}), true}, E{s({0, 1, -5, -3, -7, -9, -6, -3}), false},
              E{s({0}), false}, E{s({-1}), true}, E{s({1, 2}), false}, E{s({-1, 0}), false},
              E{s({-1, -2, -1}), true}, E{s({-1, -3, -2, -4, -3, -5}), true},
              E{s({-1, -3, -2, -4, -2}), true}, E{s({-1, -3, -2, -4, -2, -1}), false},
              E{s({-2, -1, -3}), true}};
  }
  return {};
}

std::string fixture_json(BenchmarkId id) {
  json j = to_json(ground_truth(id));
  j["name"] = benchmark_name(id);
  j["description"] = benchmark_description(id);
  json ex = json::array();
  for (const auto& e : hand_examples(id))
    ex.push_back({{"seq", sequence_to_json(e.seq)}, {"label", e.accepted ? 1 : 0}});
  j["examples"] = ex;
  return j.dump(2) + "\n";
}

std::optional<Rational> instantiate_letter(const Guard& g, const std::vector<Rational>& regs,
                                           std::mt19937_64& rng) {
  struct Bound {
    Rational v;
    bool strict = false;
  };
  std::optional<Bound> lo, hi;
  std::optional<Rational> eq;
  for (const auto& a : g) {
    const bool lc = a.lhs.kind == OperandKind::Curr, rc = a.rhs.kind == OperandKind::Curr;
    auto value = [&](const Operand& o) {
      return o.kind == OperandKind::Reg ? regs[static_cast<std::size_t>(o.index)] : o.value;
    };
    if (lc && rc) {
      if (a.op == Cmp::Lt || a.op == Cmp::Gt || a.op == Cmp::Ne) return std::nullopt;
      continue;
    }
    if (!lc && !rc) {
      if (!compare(value(a.lhs), a.op, value(a.rhs) + a.offset)) return std::nullopt;
      continue;
    }
    // curr op c
    Cmp op = lc ? a.op : mirror(a.op);
    Rational c = lc ? value(a.rhs) + a.offset : value(a.lhs) - a.offset;
    switch (op) {
      case Cmp::Lt:
      case Cmp::Le:
        if (!hi || c < hi->v || (c == hi->v && op == Cmp::Lt)) hi = Bound{c, op == Cmp::Lt};
        break;
      case Cmp::Gt:
      case Cmp::Ge:
        if (!lo || c > lo->v || (c == lo->v && op == Cmp::Gt)) lo = Bound{c, op == Cmp::Gt};
        break;
      case Cmp::Eq:
        if (eq && *eq != c) return std::nullopt;
        eq = c;
        break;
      case Cmp::Ne:
        break;  // checked on the candidate
    }
  }
  const Env base{regs.data(), nullptr, nullptr, nullptr};
  auto ok = [&](const Rational& x) {
    Env e = base;
    e.curr = &x;
    return holds(g, e);
  };
  if (eq) return ok(*eq) ? std::optional<Rational>(*eq) : std::nullopt;
  if (lo && hi && (lo->v > hi->v || (lo->v == hi->v && (lo->strict || hi->strict)))) return std::nullopt;
  if (lo && hi && lo->v == hi->v) return ok(lo->v) ? std::optional<Rational>(lo->v) : std::nullopt;

  const Rational grid(100);
  auto snap = [&](const Rational& x) { return (x * grid).floor() / grid; };
  auto snap_up = [&](const Rational& x) { return (x * grid).ceil() / grid; };
  auto jitter = [&](int range) { return std::uniform_int_distribution<int>(-range, range)(rng); };
  for (int attempt = 0; attempt < 16; ++attempt) {
    Rational x;
    if (lo && hi) {
      Rational mid = (lo->v + hi->v) / Rational(2), w = hi->v - lo->v;
      x = mid + w * Rational(jitter(25), 100);
      Rational sx = snap(x);
      if (sx > lo->v && sx < hi->v) x = sx;
    } else if (lo) {
      x = snap_up(lo->v + Rational(1) + Rational(jitter(25) + 25, 100));
    } else if (hi) {
      x = snap(hi->v - Rational(1) - Rational(jitter(25) + 25, 100));
    } else {
      x = Rational(jitter(1000), 100);
    }
    if (ok(x)) return x;
  }
  // Disequalities hit by every jittered point: fall back to exact points.
  std::vector<Rational> fallback;
  if (lo && hi) {
    for (int i = 1; i < 8; ++i) fallback.push_back(lo->v + (hi->v - lo->v) * Rational(i, 8));
  } else {
    Rational b = lo ? lo->v : hi ? hi->v : Rational(0);
    for (int i = 1; i <= 8; ++i) fallback.push_back(b + Rational(hi ? -i : i, 3));
  }
  for (const auto& x : fallback)
    if (ok(x)) return x;
  return std::nullopt;
}

MarkovSampler::MarkovSampler(Dra dra, double noise, int max_length, std::uint64_t seed)
    : dra_(std::move(dra)), completed_(complete(dra_)), noise_(noise), max_length_(max_length), rng_(seed) {
  if (!(noise >= 0.0 && noise <= 1.0)) throw InvalidArgument("noise must lie in [0, 1]");
  if (max_length < 1) throw InvalidArgument("max_length must be at least 1");
}

Rational MarkovSampler::step_letter(int state, const std::vector<Rational>& regs) {
  if (state >= dra_.num_states()) return *instantiate_letter({}, regs, rng_);
  const auto own = static_cast<int>(dra_.transitions().size());
  std::vector<int> follow, deviate;
  for (int ti : completed_.outgoing(state)) (ti < own ? follow : deviate).push_back(ti);
  const bool dev = std::bernoulli_distribution(noise_)(rng_);
  // Deviations avoid single-point cells (curr = r) when a wider cell exists:
  // a generic wrong letter almost never hits a stored value exactly.
  auto point = [&](int ti) {
    const auto& g = completed_.transitions()[static_cast<std::size_t>(ti)].guard;
    return std::any_of(g.begin(), g.end(), [](const GuardAtom& a) {
      return a.op == Cmp::Eq && (a.lhs.kind == OperandKind::Curr) != (a.rhs.kind == OperandKind::Curr);
    });
  };
  for (auto* group : dev ? std::array{&deviate, &follow} : std::array{&follow, &deviate}) {
    std::shuffle(group->begin(), group->end(), rng_);
    if (group == &deviate) std::stable_partition(group->begin(), group->end(), [&](int ti) { return !point(ti); });
    for (int ti : *group)
      if (auto x = instantiate_letter(completed_.transitions()[static_cast<std::size_t>(ti)].guard, regs, rng_))
        return *x;
  }
  return *instantiate_letter({}, regs, rng_);
}

LabelledExample MarkovSampler::draw() {
  const int len = std::uniform_int_distribution<int>(1, max_length_)(rng_);
  int state = completed_.initial();
  std::vector<Rational> regs(static_cast<std::size_t>(completed_.num_registers())), scratch;
  LabelledExample out;
  for (int i = 0; i < len; ++i) {
    Rational x = step_letter(state, regs);
    if (step(completed_, state, regs, x, scratch) < 0) throw Error("sampler: completed automaton has no move");
    out.seq.push_back(std::move(x));
  }
  out.accepted = accepts(dra_, out.seq);
  return out;
}

MarkovSampler build_sampler(BenchmarkId id, double noise, int max_length, std::uint64_t seed) {
  return MarkovSampler(ground_truth(id), noise, max_length, seed);
}

SampleSet LabelledDataset::sample_set() const {
  SampleSet s;
  for (const auto& r : records) (r.accepted ? s.positives : s.negatives).push_back(r.seq);
  return s;
}

LabelledDataset generate(MarkovSampler& sampler, std::size_t n_pos, std::size_t n_neg,
                         std::size_t max_attempts) {
  if (max_attempts == 0) max_attempts = 1000 * (n_pos + n_neg) + 10000;
  LabelledDataset d;
  std::set<Sequence> seen;
  for (std::size_t attempt = 0; d.positives < n_pos || d.negatives < n_neg; ++attempt) {
    if (attempt == max_attempts)
      throw QuotaUnreachable("sampler: quotas (" + std::to_string(n_pos) + ", " + std::to_string(n_neg) +
                             ") not met after " + std::to_string(max_attempts) + " draws (have " +
                             std::to_string(d.positives) + ", " + std::to_string(d.negatives) + ")");
    LabelledExample e = sampler.draw();
    std::size_t& have = e.accepted ? d.positives : d.negatives;
    if (have >= (e.accepted ? n_pos : n_neg) || !seen.insert(e.seq).second) continue;
    ++have;
    d.records.push_back(std::move(e));
  }
  return d;
}

}  // namespace regrobust
