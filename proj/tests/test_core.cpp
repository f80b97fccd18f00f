#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "regrobust/dra_ops.hpp"
#include "regrobust/errors.hpp"
#include "regrobust/order_cells.hpp"
#include "regrobust/serialize.hpp"

using namespace regrobust;
using fx::at;
using fx::C;
using fx::K;
using fx::R;
using fx::seq;

TEST_CASE("rational arithmetic is exact and normalized") {
  CHECK(Rational::parse("0.1") == Rational(1, 10));
  CHECK(Rational::parse("-2.5e1") == Rational(-25));
  CHECK(Rational::parse("6/-4").str() == "-3/2");
  CHECK(Rational(3).str() == "3/1");
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(-7, 2).floor() == Rational(-4));
  CHECK(Rational(-7, 2).ceil() == Rational(-3));
  Rational big(std::int64_t{1} << 62);
  Rational sq = big * big * big;
  CHECK_FALSE(sq.is_small());
  CHECK(sq / big / big == big);
  CHECK((sq / big / big).is_small());
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(ExtendedCost::infinity() > ExtendedCost(Rational(1000000)));
  CHECK((ExtendedCost(Rational(1)) + ExtendedCost::infinity()).finite() == false);
  CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::parse("abc"), ParseError);
}

TEST_CASE("running example runs") {
  Dra a = fx::fig3();
  CHECK(accepts(a, seq({0, -1, 5, 3, 7, 9, 6, 8})));
  RunResult r = run(a, seq({0, -1, 5, 3, 7, 9, 6, 3}));
  CHECK_FALSE(r.accepted);
  CHECK(r.died);
  // dies in q2 with r1 = 3, r3 = 6
  CHECK(r.trace.back().config.state == 2);
  CHECK(r.trace.back().config.registers[0] == Rational(3));
  CHECK(r.trace.back().config.registers[2] == Rational(6));
  CHECK(r.trace.size() <= 9);
  CHECK(accepts(a, seq({0, -1, 5, 3, 7, 9, 6, 4})));
  CHECK_FALSE(accepts(a, Sequence{}));
  CHECK(check_determinism(a).empty());
}

TEST_CASE("determinism check") {
  Dra two_top(1, 0, 0, {true}, {{0, {}, {}, 0}, {0, {}, {}, 0}});
  auto v = check_determinism(two_top);
  REQUIRE(v.size() == 1);
  Dra halves(1, 1, 0, {true},
             {{0, {at(R(0), Cmp::Lt, C())}, {}, 0}, {0, {at(R(0), Cmp::Gt, C())}, {}, 0}});
  CHECK(check_determinism(halves).empty());
  Dra overlap(1, 1, 0, {true},
              {{0, {at(R(0), Cmp::Le, C())}, {}, 0}, {0, {at(R(0), Cmp::Ge, C())}, {}, 0}});
  auto w = check_determinism(overlap);
  REQUIRE(w.size() == 1);
  // the witness really enables both guards
  Env env{w[0].registers.data(), &w[0].letter, nullptr, nullptr};
  CHECK(holds(overlap.transitions()[0].guard, env));
  CHECK(holds(overlap.transitions()[1].guard, env));
  CHECK_THROWS_AS(run(two_top, seq({1})), MultipleEnabledTransitions);
}

TEST_CASE("completion of a single equality loop") {
  Dra eq0(1, 0, 0, {true}, {{0, {at(C(), Cmp::Eq, K(0))}, {}, 0}});
  Dra c = complete(eq0);
  CHECK(c.num_states() == 2);
  CHECK_FALSE(c.accepting(1));
  CHECK(check_determinism(c).empty());
  int to_sink = 0;
  for (const auto& t : c.transitions())
    if (t.from == 0 && t.to == 1) ++to_sink;
  CHECK(to_sink == 2);
  CHECK(accepts(c, seq({0, 0})));
  CHECK_FALSE(accepts(c, seq({0, -1})));
  CHECK_FALSE(run(c, seq({5, 0})).died);
}

TEST_CASE("completion and complement on the running example") {
  Dra a = fx::fig3();
  Dra c = complete(a);
  RunResult r = run(c, seq({0, -1, 5, 3, 7, 9, 6, 3}));
  CHECK_FALSE(r.died);
  CHECK(r.trace.back().config.state == a.num_states());
  CHECK(accepts(complement(a), seq({0, -1, 5, 3, 7, 9, 6, 3})));
  CHECK_FALSE(accepts(complement(a), seq({0, -1, 5, 3, 7, 9, 6, 8})));
}

TEST_CASE("split_disequalities") {
  Dra ne(1, 1, 0, {true}, {{0, {at(R(0), Cmp::Ne, C())}, {{0, C()}}, 0}});
  Dra s = split_disequalities(ne);
  REQUIRE(s.transitions().size() == 2);
  CHECK(s.transitions()[0].guard == Guard{at(R(0), Cmp::Lt, C())});
  CHECK(s.transitions()[1].guard == Guard{at(R(0), Cmp::Gt, C())});
  CHECK(split_disequalities(fx::fig3()) == fx::fig3());
}

TEST_CASE("exhaustive partition properties on random automata") {
  std::mt19937_64 rng(7);
  std::vector<Rational> grid{Rational(-1), Rational(0), Rational(1, 2), Rational(2), Rational(4)};
  for (int i = 0; i < 25; ++i) {
    Dra a = fx::random_dra(rng);
    REQUIRE(check_determinism(a).empty());
    Dra c = complete(a);
    Dra n = complement(a);
    Dra s = split_disequalities(a);
    CHECK(check_determinism(c).empty());
    CHECK(check_determinism(n).empty());
    CHECK(check_determinism(s).empty());
    bool ok = true;
    fx::for_each_sequence(grid, 5, [&](const Sequence& w) {
      bool x = accepts(a, w);
      if (run(c, w).died) ok = false;
      if (accepts(c, w) != x) ok = false;
      if (accepts(n, w) == x) ok = false;
      if (accepts(s, w) != x) ok = false;
    });
    CHECK(ok);
  }
}

TEST_CASE("order cells agree with the closure decision") {
  std::mt19937_64 rng(3);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int i = 0; i < 400; ++i) {
    std::vector<OAtom> atoms;
    int na = pick(1, 4);
    for (int j = 0; j < na; ++j) {
      auto term = [&] { return pick(0, 3) == 0 ? OTerm::constant(Rational(pick(0, 2))) : OTerm::variable(pick(0, 2)); };
      OAtom a{term(), static_cast<Cmp>(pick(0, 5)), term()};
      if (!a.lhs.is_var() && !a.rhs.is_var()) a.lhs = OTerm::variable(0);
      atoms.push_back(a);
    }
    auto m = find_model(atoms, 3);
    CHECK(satisfiable(atoms) == m.has_value());
    if (m)
      for (const auto& a : atoms) CHECK(holds(a, *m));
  }
}

TEST_CASE("serialization round trip and errors") {
  Dra a = fx::fig3();
  CHECK(parse_dra(serialize(a)) == a);
  Dra d = complement(split_disequalities(a));
  CHECK(parse_dra(serialize(d)) == d);
  try {
    parse_dra("{\"kind\": \"dra\",\n  \"states\": 1,\n  oops}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(parse_dra(R"({"kind":"dra","states":1,"registers":0,"initial":0,"accepting":[3],"transitions":[]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_dra(R"({"kind":"dra","states":1,"registers":0,"initial":0,"accepting":[],
    "transitions":[{"from":0,"to":0,"guard":[{"lhs":{"reg":0},"op":"<","rhs":{"curr":null}}]}]})"),
                  ParseError);
  Dra c(1, 1, 0, {true}, {{0, {at(C(), Cmp::Lt, Operand::constant(Rational(1, 10)))}, {{0, C()}}, 0}});
  CHECK(parse_dra(serialize(c)) == c);
  CHECK(serialize(c).find("\"1/10\"") != std::string::npos);
}
