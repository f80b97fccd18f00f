#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "regrobust/benchmarks.hpp"
#include "regrobust/dra_ops.hpp"
#include "regrobust/errors.hpp"
#include "regrobust/localsearch.hpp"
#include "regrobust/serialize.hpp"
#include "regrobust/smt.hpp"

using namespace regrobust;

namespace {

SampleSet dataset(BenchmarkId id, std::size_t per_class, std::uint64_t seed, int max_len = 8) {
  auto sampler = build_sampler(id, 0.5, max_len, seed);
  return generate(sampler, per_class, per_class).sample_set();
}

Dra accept_all() {
  return Dra(1, 0, 0, {true}, {Transition{0, {}, {}, 0}});
}

// Every sample replayed by hand: count of correctly classified samples.
std::size_t count_correct(const Dra& d, const SampleSet& s) {
  std::size_t n = 0;
  for (const auto& w : s.positives) n += accepts(d, w) ? 1 : 0;
  for (const auto& w : s.negatives) n += accepts(d, w) ? 0 : 1;
  return n;
}

}  // namespace

TEST_CASE("score: exact fractions") {
  SampleSet s;
  for (int i = 1; i <= 5; ++i) s.positives.push_back({Rational(i)});
  for (int i = 1; i <= 5; ++i) s.negatives.push_back({Rational(i), Rational(i)});
  CHECK(score(accept_all(), s) == Rational(1, 2));

  // accepts exactly the length-1 words
  Dra len1(2, 0, 0, {false, true}, {Transition{0, {}, {}, 1}});
  CHECK(score(len1, s) == Rational(1));

  SampleSet t = s;
  t.negatives.push_back({Rational(7)});  // misclassified by len1; now 10 of 11
  t.positives.pop_back();
  CHECK(score(len1, t) == Rational(9, 10));

  CHECK_THROWS_AS(score(len1, SampleSet{}), EmptySampleSet);

  const SampleSet s1 = dataset(BenchmarkId::S1, 50, 3);
  CHECK(score(ground_truth(BenchmarkId::S1), s1) == Rational(1));
}

TEST_CASE("score: serial and parallel kernels agree") {
  const SampleSet s = dataset(BenchmarkId::S9, 120, 5);
  std::mt19937_64 rng(11);
  const auto space = SearchSpace::build(3, 1, {Rational(0)});
  for (int i = 0; i < 20; ++i) {
    Dra d = random_automaton(space, rng);
    CHECK(correct_serial(d, s) == correct_parallel(d, s));
    CHECK(correct_serial(d, s) == count_correct(d, s));
  }
}

TEST_CASE("search space: catalog entries are deterministic and recoverable") {
  const auto space = SearchSpace::build(2, 2, {Rational(0), Rational(5)});
  CHECK(space.assignments.size() == 25);  // (k + c + 1)^k
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    Dra d = random_automaton(space, rng);
    CHECK(check_determinism(d).empty());
    for (int q = 0; q < d.num_states(); ++q) {
      auto c = find_choice(space, d, q);
      REQUIRE(c.has_value());
      CHECK(op_delta(d, q, space, *c) == d);
    }
  }
  CHECK_THROWS_AS(SearchSpace::build(0, 1, {}), InvalidArgument);
}

TEST_CASE("random automata always have an accepting state") {
  const auto space = SearchSpace::build(2, 1, {});
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto acc = random_automaton(space, rng).accepting_set();
    CHECK(std::find(acc.begin(), acc.end(), true) != acc.end());
  }
}

TEST_CASE("mutations: op_f is an involution, op_delta stays deterministic") {
  const auto space = SearchSpace::build(3, 1, {Rational(0)});
  std::mt19937_64 rng(2);
  const SampleSet s = dataset(BenchmarkId::S2, 40, 9);
  for (int i = 0; i < 200; ++i) {
    Dra d = random_automaton(space, rng);
    const int q = std::uniform_int_distribution<int>(0, 2)(rng);
    Dra f = op_f(d, q);
    CHECK(f.accepting_set()[static_cast<std::size_t>(q)] != d.accepting_set()[static_cast<std::size_t>(q)]);
    CHECK(op_f(f, q) == d);
    Dra m = op_delta(d, q, space, random_choice(space, rng));
    CHECK(check_determinism(m).empty());
    for (int p = 0; p < 3; ++p)
      if (p != q) CHECK(m.outgoing(p).size() == d.outgoing(p).size());
  }
  // toggling an unreachable state leaves the score alone
  Dra d(2, 0, 0, {true, false}, {Transition{0, {}, {}, 0}});
  CHECK(score(op_f(d, 1), s) == score(d, s));
  // toggling q0 flips the empty word
  CHECK(accepts(op_f(d, 0), Sequence{}) != accepts(d, Sequence{}));
}

TEST_CASE("hill climbing: trivial start, monotone trace, reproducible") {
  const SampleSet s = dataset(BenchmarkId::S1, 100, 4);
  const auto space = SearchSpace::build(2, 1, {});
  SearchConfig cfg;
  cfg.max_iteration = 2000;

  auto perfect = hill_climb(s, space, cfg, ground_truth(BenchmarkId::S1), 1);
  CHECK(perfect.iterations == 0);
  CHECK(perfect.score == Rational(1));
  CHECK(perfect.dra == ground_truth(BenchmarkId::S1));

  std::mt19937_64 rng(5);
  Dra init = random_automaton(space, rng);
  auto a = hill_climb(s, space, cfg, init, 77);
  auto b = hill_climb(s, space, cfg, init, 77);
  CHECK(a.dra == b.dra);
  CHECK(a.trace == b.trace);
  for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i - 1] < a.trace[i]);
  CHECK(a.score == score(a.dra, s));
  CHECK(check_determinism(a.dra).empty());

  cfg.restarts = 3;
  auto r1 = local_search(s, space, cfg);
  auto r2 = local_search(s, space, cfg);
  CHECK(serialize(r1.dra) == serialize(r2.dra));
  CHECK(r1.score == score(r1.dra, s));
}

TEST_CASE("hill climbing: S1 500 samples, n=2, k=1") {
  const SampleSet s = dataset(BenchmarkId::S1, 250, 42);
  const auto space = SearchSpace::build(2, 1, {});
  SearchConfig cfg;
  cfg.max_iteration = 100000;
  cfg.restarts = 5;
  auto res = local_search(s, space, cfg);
  int perfect = 0;
  for (const auto& c : res.climbs) perfect += c.score == Rational(1) ? 1 : 0;
  CHECK(perfect >= 4);
}

TEST_CASE("smt: rational literals") {
  CHECK(smt_rational(Rational(3)) == "3.0");
  CHECK(smt_rational(Rational(-3)) == "(- 3.0)");
  CHECK(smt_rational(Rational(-5, 2)) == "(- (/ 5.0 2.0))");
  CHECK(smt_rational(Rational(0)) == "0.0");
}

TEST_CASE("smt: model decoding") {
  SynthesisParams p;
  p.n = 2;
  p.k = 1;
  p.c = 1;
  const auto shapes = enumerate_shapes(1, 1);
  int eq_reg = -1, any = -1;
  for (std::size_t g = 0; g < shapes.size(); ++g) {
    const auto& s = shapes[g];
    if (s.low.kind == EndKind::None && s.high.kind == EndKind::None) any = static_cast<int>(g);
    if (s.low.kind == EndKind::Reg && s.high.kind == EndKind::Reg && !s.low_strict && !s.high_strict)
      eq_reg = static_cast<int>(g);
  }
  REQUIRE(any >= 0);
  REQUIRE(eq_reg >= 0);
  // q0 --T, r0 := curr--> q1 ; q1 --curr = r0--> q1 ; F = {q1}; C_0 = -5/2
  const std::string g0 = std::to_string(any), g1 = std::to_string(eq_reg);
  const std::string model = "(model\n  (define-fun t_0_" + g0 + " () Bool true)\n  (define-fun y_0_" + g0 +
                            "_1 () Bool true)\n  (define-fun b_0_" + g0 + "_0_2 () Bool true)\n" +
                            "  (define-fun t_1_" + g1 + " () Bool true)\n  (define-fun y_1_" + g1 +
                            "_1 () Bool true)\n  (define-fun b_1_" + g1 + "_0_0 () Bool true)\n" +
                            "  (define-fun f_1 () Bool true)\n  (define-fun f_0 () Bool false)\n" +
                            "  (define-fun C_0 () Real\n    (- (/ 5.0 2.0)))\n  (define-fun r_3_0 () Real 7.0)\n)\n";
  auto d = decode_model_full(model, p);
  CHECK(d.constants == std::vector<Rational>{Rational(-5, 2)});
  CHECK(d.dra.transitions().size() == 2);
  CHECK(accepts(d.dra, Sequence{Rational(4), Rational(4), Rational(4)}));
  CHECK_FALSE(accepts(d.dra, Sequence{Rational(4), Rational(5)}));
  CHECK_FALSE(accepts(d.dra, Sequence{}));

  CHECK_THROWS_AS(decode_model("(model (define-fun t_0_0 () Bool true)", p), MalformedModel);
  CHECK_THROWS_AS(decode_model("(model (define-fun f_0 () Bool 3.0))", p), MalformedModel);
  CHECK_THROWS_AS(decode_model("(model (define-fun t_0_" + g0 + " () Bool true))", p), MalformedModel);
  CHECK_THROWS_AS(decode_model("sat", p), MalformedModel);
}

TEST_CASE("smt: blocking clauses") {
  SynthesisParams p;
  p.k = 1;
  p.c = 2;
  const auto shapes = enumerate_shapes(1, 2);
  auto find = [&](EndKind lk, int li, bool ls, EndKind hk, int hi, bool hs) {
    for (std::size_t g = 0; g < shapes.size(); ++g) {
      const auto& s = shapes[g];
      if (s.low.kind == lk && s.high.kind == hk && (lk == EndKind::None || (s.low.index == li && s.low_strict == ls)) &&
          (hk == EndKind::None || (s.high.index == hi && s.high_strict == hs)))
        return static_cast<int>(g);
    }
    FAIL("shape not found");
    return -1;
  };
  const int below = find(EndKind::None, 0, false, EndKind::Reg, 0, true);
  const int above = find(EndKind::Reg, 0, true, EndKind::None, 0, false);
  const int at_most = find(EndKind::None, 0, false, EndKind::Reg, 0, false);
  const int at_least = find(EndKind::Reg, 0, false, EndKind::None, 0, false);
  CHECK(blocking_clause(0, below, above, p).empty());  // never overlap
  CHECK(blocking_clause(0, at_most, above, p).empty());
  CHECK(blocking_clause(0, at_most, at_least, p) == "(assert (not (and t_0_" + std::to_string(at_most) + " t_0_" +
                                                        std::to_string(at_least) + ")))\n");
  const int le_c0 = find(EndKind::None, 0, false, EndKind::Const, 0, false);
  const int gt_c1 = find(EndKind::Const, 1, true, EndKind::None, 0, false);
  CHECK(blocking_clause(0, le_c0, gt_c1, p).find("(< C_1 C_0)") != std::string::npos);
  p.constant_pool = std::vector<Rational>{Rational(0), Rational(5)};
  CHECK(blocking_clause(0, le_c0, gt_c1, p).empty());
}

TEST_CASE("smt: trivial and contradictory sample sets") {
  SampleSet s;
  s.positives.push_back({Rational(1)});
  SynthesisOptions opts;
  opts.budget = 60;
  auto r = synthesize(s, opts);
  CHECK(r.params.n == 1);
  CHECK(r.dra.num_states() == 1);
  CHECK(r.dra.accepting_set()[0]);
  CHECK(accepts(r.dra, Sequence{Rational(1)}));

  SampleSet bad;
  bad.positives.push_back({Rational(1), Rational(2)});
  bad.negatives.push_back({Rational(1), Rational(2)});
  for (int n = 1; n <= 2; ++n)
    for (int k = 0; k <= 1; ++k) {
      SynthesisParams p;
      p.n = n;
      p.k = k;
      p.c = 1;
      SmtSession ses(SolverConfig{});
      ses.send(encode(bad, p));
      CHECK(ses.check_sat() == "unsat");
    }
  opts.max_states = 2;
  opts.max_registers = 1;
  opts.max_constants = 1;
  CHECK_THROWS_AS(synthesize(bad, opts), BudgetExhausted);
}

TEST_CASE("smt: learns consistent deterministic automata for L1, S1, S2") {
  for (auto id : {BenchmarkId::L1, BenchmarkId::S1, BenchmarkId::S2}) {
    CAPTURE(benchmark_name(id));
    const SampleSet s = dataset(id, 25, 7, 6);
    SynthesisOptions opts;
    opts.budget = 60;
    auto r = synthesize(s, opts);
    CHECK(validate_consistency(r.dra, s));
    CHECK(check_determinism(r.dra).empty());
    CHECK(count_correct(r.dra, s) == s.size());
    if (id == BenchmarkId::S1) {
      CHECK(r.params.n <= 2);
      CHECK(r.params.k == 1);
    }
    // flipping the accepting bit of a state some positive ends in breaks consistency
    for (int q = 0; q < r.dra.num_states(); ++q) {
      bool used = false;
      for (const auto& w : s.positives) {
        auto rr = run(r.dra, w);
        used = used || (!rr.died && rr.trace.back().config.state == q);
      }
      if (used) CHECK_FALSE(validate_consistency(op_f(r.dra, q), s));
    }
  }
  CHECK(validate_consistency(ground_truth(BenchmarkId::S1), SampleSet{}));
}

TEST_CASE("smt: L1 encoding with n=2, k=1, c=2 is satisfiable") {
  const SampleSet s = dataset(BenchmarkId::L1, 25, 8, 6);
  SynthesisParams p;
  p.n = 2;
  p.k = 1;
  p.c = 2;
  auto out = solve_shape(s, p, SolverConfig{});
  REQUIRE(out.status == "sat");
  REQUIRE(out.model.has_value());
  CHECK(check_determinism(out.model->dra).empty());
  CHECK(validate_consistency(out.model->dra, s));
}

TEST_CASE("smt: unsatisfiability is monotone in the sample set") {
  std::mt19937_64 rng(21);
  int unsat_seen = 0;
  for (int trial = 0; trial < 6; ++trial) {
    // random labels on short integer words
    std::set<Sequence> seen;
    std::vector<std::pair<Sequence, bool>> all;
    while (all.size() < 16) {
      Sequence w;
      const int len = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int i = 0; i < len; ++i) w.emplace_back(std::uniform_int_distribution<int>(0, 3)(rng));
      if (seen.insert(w).second) all.push_back({w, std::bernoulli_distribution(0.5)(rng)});
    }
    SynthesisParams p;
    p.n = 2;
    p.k = 1;
    auto status = [&](std::size_t m) {
      SampleSet s;
      for (std::size_t i = 0; i < m; ++i) (all[i].second ? s.positives : s.negatives).push_back(all[i].first);
      SmtSession ses(SolverConfig{});
      ses.send(encode(s, p));
      return ses.check_sat();
    };
    bool was_unsat = false;
    for (std::size_t m : {4u, 8u, 12u, 16u}) {
      const std::string st = status(m);
      REQUIRE(st != "unknown");
      if (was_unsat) CHECK(st == "unsat");
      if (st == "unsat") {
        was_unsat = true;
        ++unsat_seen;
      }
    }
  }
  CHECK(unsat_seen > 0);
}

TEST_CASE("smt: solver failures surface as errors") {
  SolverConfig cfg;
  cfg.command = "/nonexistent/solver";
  CHECK_THROWS_AS(SmtSession{cfg}, SolverError);
  SmtSession ses(SolverConfig{});
  ses.send("(assert (undeclared_symbol))\n");
  CHECK_THROWS_AS(ses.check_sat(), SolverError);
}
