#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "regrobust/dra_ops.hpp"
#include "regrobust/errors.hpp"
#include "regrobust/metrics.hpp"
#include "regrobust/robustness.hpp"
#include "robust_oracle.hpp"

using namespace regrobust;
using fx::at;
using fx::C;
using fx::K;
using fx::R;
using fx::seq;

namespace {

const Sequence kV = seq({0, -1, 5, 3, 7, 9, 6, 8});

RobustnessVerdict fig3_query(const Rational& delta) {
  return check_robustness({fx::fig3(), kV, build_metric(MetricKind::LastLetter), delta, Side::Auto});
}

// Relaxation to a fixpoint, independent of the Dijkstra implementation.
std::optional<Rational> relax_min(const CoverabilityGraph& g) {
  std::vector<std::optional<Rational>> d(g.vertices.size());
  d[static_cast<std::size_t>(g.source)] = Rational(0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : g.edges) {
      const auto& du = d[static_cast<std::size_t>(e.from)];
      if (!du) continue;
      Rational nd = *du + e.weight;
      auto& dv = d[static_cast<std::size_t>(e.to)];
      if (!dv || nd < *dv) dv = nd, changed = true;
    }
  }
  std::optional<Rational> best;
  for (int t : g.targets)
    if (auto& x = d[static_cast<std::size_t>(t)]; x && (!best || *x < *best)) best = *x;
  return best;
}

}  // namespace

TEST_CASE("running example threshold") {
  auto r5 = fig3_query(Rational(5));
  CHECK(r5.robust);
  CHECK_FALSE(r5.witness);
  auto r51 = fig3_query(Rational(51, 10));
  CHECK_FALSE(r51.robust);
  REQUIRE(r51.witness);
  CHECK(r51.min_flip_cost == ExtendedCost(Rational(5)));
  CHECK(r51.witness->w.back() <= Rational(3));
  CHECK(r51.witness->cost < Rational(51, 10));
  CHECK_FALSE(accepts(fx::fig3(), r51.witness->w));
  CHECK(min_flip_cost(fx::fig3(), kV, build_metric(MetricKind::LastLetter)) == ExtendedCost(Rational(5)));
}

TEST_CASE("delta ladder on the running example") {
  for (int d = 1; d <= 10; ++d) {
    auto r = fig3_query(Rational(d));
    CHECK_MESSAGE(r.robust == (d <= 5), "delta " << d);
  }
}

TEST_CASE("projection") {
  Raa ll = build_metric(MetricKind::LastLetter);
  auto bp = project_and_bound(ll, kV, Rational(6));
  CHECK(bp.alpha >= Rational(9));
  CHECK(bp.alpha >= Rational(6));
  for (const auto& t : bp.raa.transitions()) CHECK(t.acc.a1.sign() == 0);
  Raa ham = build_metric(MetricKind::Hamming);
  auto bh = project_and_bound(ham, seq({2, -7}), Rational(1));
  CHECK(bh.alpha >= Rational(7));
  // the pinned head only accepts v
  CHECK(evaluate(bh.raa, seq({2, -7}), seq({2, 0})) == ExtendedCost(Rational(1)));
  CHECK_FALSE(evaluate(bh.raa, seq({2, -6}), seq({2, 0})).finite());
  CHECK_FALSE(evaluate(bh.raa, seq({2}), seq({2})).finite());
}

TEST_CASE("product output") {
  Raa ll = build_metric(MetricKind::LastLetter);
  Dra target = complement(fx::fig3());
  auto prod = product(project_and_bound(ll, kV, Rational(6)), target);
  CHECK(evaluate(prod.raa, kV, seq({0, -1, 5, 3, 7, 9, 6, 3})) == ExtendedCost(Rational(5)));
  CHECK_FALSE(evaluate(prod.raa, kV, kV).finite());
  CHECK_FALSE(evaluate(prod.raa, kV, seq({0, -1, 5, 3, 7, 9, 6, 4})).finite());

  // exhaustive small grid: output = metric cost when the label flips
  std::mt19937_64 rng(5);
  Raa ham = build_metric(MetricKind::Hamming);
  for (int i = 0; i < 6; ++i) {
    Dra a = split_disequalities(fx::random_dra(rng));
    Sequence v = oracle::random_seq(rng, 1, 3, 0, 3);
    bool lv = accepts(a, v);
    auto p = product(project_and_bound(ham, v, Rational(100)), lv ? complement(a) : complete(a));
    fx::for_each_sequence({Rational(0), Rational(1), Rational(3)}, 3, [&](const Sequence& w) {
      bool bounded = std::all_of(w.begin(), w.end(), [&](const Rational& x) { return oracle::absr(x) <= p.alpha; });
      ExtendedCost expect =
          accepts(a, w) != lv && bounded ? oracle::hamming(v, w) : ExtendedCost::infinity();
      CHECK(evaluate(p.raa, v, w) == expect);
    });
  }
}

TEST_CASE("closure") {
  Raa r(1, 1, 0, {true}, {{0, {at(R(0), Cmp::Lt, Operand::curr2())}, {}, {0, 0, 0}, Move::Both, 0}});
  Raa c = closure(r);
  CHECK(c.transitions()[0].guard[0].op == Cmp::Le);
  CHECK(closure(c) == c);
  Raa ne(1, 0, 0, {true}, {{0, {at(Operand::curr1(), Cmp::Ne, Operand::curr2())}, {}, {0, 0, 0}, Move::Both, 0}});
  CHECK_THROWS_AS(closure(ne), DisequalityPresent);
}

TEST_CASE("closed grid is a lower bound and can be spurious") {
  // w1 > 0 stored, then w2 <= 0 and w2 >= w1: unreachable, although the
  // relaxed guards admit w = (0, 0).
  Dra a(3, 1, 0, {false, false, true},
        {{0, {at(C(), Cmp::Gt, K(0))}, {{0, C()}}, 1},
         {1, {at(C(), Cmp::Le, K(0)), at(C(), Cmp::Ge, R(0))}, {}, 2}});
  Sequence v = seq({5, 5});
  Raa ham = build_metric(MetricKind::Hamming);
  CHECK_FALSE(min_flip_cost(a, v, ham).finite());
  auto prod = product(project_and_bound(ham, v, std::nullopt), complete(a));
  auto closed = shortest_path(build_graph(prod, GraphMode::Closed));
  REQUIRE(closed);
  CHECK(closed->weight == Rational(2));

  std::mt19937_64 rng(9);
  Raa man = build_metric(MetricKind::Manhattan);
  for (int i = 0; i < 20; ++i) {
    Dra d = split_disequalities(fx::random_dra(rng));
    Sequence vv = oracle::random_seq(rng, 1, 3, 0, 3);
    auto p = product(project_and_bound(man, vv, std::nullopt), accepts(d, vv) ? complement(d) : complete(d));
    auto ge = build_graph(p, GraphMode::Exact);
    auto gc = build_graph(p, GraphMode::Closed);
    auto pe = shortest_path(ge);
    auto pc = shortest_path(gc);
    if (pe) {
      REQUIRE(pc);
      CHECK(pc->weight <= pe->weight);
    }
    CHECK(relax_min(ge) == (pe ? std::optional<Rational>(pe->weight) : std::nullopt));
    CHECK(relax_min(gc) == (pc ? std::optional<Rational>(pc->weight) : std::nullopt));
    for (const auto& e : ge.edges) CHECK(e.weight.sign() >= 0);
  }
}

TEST_CASE("trivial verdicts") {
  Dra all(1, 0, 0, {true}, {{0, {}, {}, 0}});
  Raa ham = build_metric(MetricKind::Hamming);
  CHECK_FALSE(min_flip_cost(all, seq({1, 2}), ham).finite());
  auto r = check_robustness({all, seq({1, 2}), ham, Rational(1000), Side::Auto});
  CHECK(r.robust);
  // forcing the wrong side: v itself is a zero-cost witness
  auto s = check_robustness({all, seq({1, 2}), ham, Rational(1, 1000), Side::FlipToAccept});
  CHECK_FALSE(s.robust);
  REQUIRE(s.witness);
  CHECK(s.witness->cost == Rational(0));
  CHECK_THROWS_AS(check_robustness({all, Sequence{}, ham, Rational(1), Side::Auto}), InvalidArgument);
  CHECK_THROWS_AS(check_robustness({all, seq({1}), ham, Rational(0), Side::Auto}), InvalidArgument);
}

TEST_CASE("strict guards force infinitesimal witnesses") {
  // accept iff the single letter is strictly above 2; v = (0) is rejected
  Dra a(2, 0, 0, {false, true}, {{0, {at(C(), Cmp::Gt, K(2))}, {}, 1}});
  Raa man = build_metric(MetricKind::Manhattan);
  Sequence v = seq({0});
  CHECK(min_flip_cost(a, v, man) == ExtendedCost(Rational(2)));
  auto r = check_robustness({a, v, man, Rational(2), Side::Auto});
  CHECK(r.robust);
  auto n = check_robustness({a, v, man, Rational(21, 10), Side::Auto});
  CHECK_FALSE(n.robust);
  REQUIRE(n.witness);
  CHECK(n.witness->w[0] > Rational(2));
  CHECK(n.witness->cost < Rational(21, 10));
}

TEST_CASE("graph limit") {
  Raa edit = build_metric(MetricKind::Edit);
  RobustnessQuery q{fx::fig3(), kV, edit, Rational(3), Side::Auto, 50};
  CHECK_THROWS_AS(check_robustness(q), GraphLimitExceeded);
}

TEST_CASE("other metrics on the running example") {
  Dra a = fx::fig3();
  for (auto k : {MetricKind::Hamming, MetricKind::Manhattan, MetricKind::Edit, MetricKind::Dtw}) {
    Raa m = build_metric(k);
    ExtendedCost c = min_flip_cost(a, kV, m);
    REQUIRE(c.finite());
    auto r = check_robustness({a, kV, m, c.value() + Rational(1, 10), Side::Auto});
    CHECK_FALSE(r.robust);
    REQUIRE(r.witness);
    CHECK_FALSE(accepts(a, r.witness->w));
    CHECK(evaluate(m, kV, r.witness->w).value() < c.value() + Rational(1, 10));
    if (c.value().sign() > 0) CHECK(check_robustness({a, kV, m, c.value(), Side::Auto}).robust);
  }
  // an infinitesimal raise of the first letter already kills the run
  CHECK(min_flip_cost(a, kV, build_metric(MetricKind::Manhattan)) == ExtendedCost(Rational(0)));
  // changing the last letter to 3 flips it; one substitution
  CHECK(min_flip_cost(a, kV, build_metric(MetricKind::Hamming)) == ExtendedCost(Rational(1)));
  CHECK(min_flip_cost(a, kV, build_metric(MetricKind::Edit)) == ExtendedCost(Rational(1)));
}

TEST_CASE("random automata agree with the brute-force infimum") {
  std::mt19937_64 rng(21);
  struct M {
    MetricKind kind;
    oracle::LenMetric len;
  };
  const M metrics[] = {{MetricKind::Hamming, oracle::LenMetric::Hamming},
                       {MetricKind::LastLetter, oracle::LenMetric::LastLetter},
                       {MetricKind::Manhattan, oracle::LenMetric::Manhattan}};
  for (int i = 0; i < 12; ++i) {
    Dra a = split_disequalities(fx::random_dra(rng));
    Sequence v = oracle::random_seq(rng, 1, 3, -1, 4);
    bool lv = accepts(a, v);
    for (const auto& m : metrics) {
      Raa raa = build_metric(m.kind);
      oracle::FlipSearch fs(a, v, m.len, !lv);
      auto expect = fs.run();
      ExtendedCost got = min_flip_cost(a, v, raa);
      CHECK(got == (expect ? ExtendedCost(*expect) : ExtendedCost::infinity()));
      auto grid = oracle::grid_flip_cost(a, v, m.len, !lv);
      if (grid) CHECK(got <= ExtendedCost(*grid));
      for (Rational delta : {Rational(1, 2), Rational(1), Rational(2), Rational(7, 2)}) {
        auto r = check_robustness({a, v, raa, delta, Side::Auto});
        CHECK(r.robust == !(expect && *expect < delta));
        if (!r.robust) {
          REQUIRE(r.witness);
          CHECK(accepts(a, r.witness->w) != lv);
          CHECK(evaluate(raa, v, r.witness->w).value() < delta);
        }
      }
    }
  }
}
