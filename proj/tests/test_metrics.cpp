#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "regrobust/metrics.hpp"
#include "regrobust/serialize.hpp"

using namespace regrobust;
using fx::seq;

TEST_CASE("metric examples") {
  Raa edit = build_metric(MetricKind::Edit);
  CHECK(evaluate(edit, seq({1, 2, 3, 7, 9}), seq({1, 3, 7, 10})) == ExtendedCost(Rational(2)));
  Raa dtw = build_metric(MetricKind::Dtw);
  CHECK(evaluate(dtw, seq({0}), seq({0, 0, 0, 0})) == ExtendedCost(Rational(0)));
  Raa ham = build_metric(MetricKind::Hamming);
  CHECK_FALSE(evaluate(ham, seq({1, 2}), seq({1, 2, 3})).finite());
  CHECK(evaluate(ham, seq({1, 2, 3}), seq({1, 5, 3})) == ExtendedCost(Rational(1)));
  Raa man = build_metric(MetricKind::Manhattan);
  CHECK(evaluate(man, seq({0, 0}), seq({1, -2})) == ExtendedCost(Rational(3)));
  Raa ll = build_metric(MetricKind::LastLetter);
  CHECK(evaluate(ll, seq({0, 1, 2}), seq({0, 1, 5})) == ExtendedCost(Rational(3)));
  CHECK_FALSE(evaluate(ll, seq({0, 1, 2}), seq({0, 9, 2})).finite());
  CHECK(evaluate(ll, seq({4}), seq({4})) == ExtendedCost(Rational(0)));
}

TEST_CASE("metric names parse") {
  CHECK(parse_metric("threshold_hamming:1/2").threshold == Rational(1, 2));
  CHECK(metric_name(parse_metric("edit:2:3")) == "edit:2:3");
  CHECK(metric_name(parse_metric("last_letter")) == "last_letter");
  CHECK_THROWS(parse_metric("cosine"));
  CHECK_THROWS(parse_metric("threshold_hamming"));
}

TEST_CASE("edit and dtw match dynamic programming on random pairs") {
  std::mt19937_64 rng(11);
  Raa edit = build_metric(MetricKind::Edit);
  Raa edit23 = build_metric(parse_metric("edit:2:3"));
  Raa dtw = build_metric(MetricKind::Dtw);
  for (int i = 0; i < 400; ++i) {
    Sequence v = oracle::random_seq(rng, 0, 6, 0, 3), w = oracle::random_seq(rng, 0, 6, 0, 3);
    CHECK(evaluate(edit, v, w) == oracle::levenshtein(v, w, Rational(1), Rational(1)));
    CHECK(evaluate(edit23, v, w) == oracle::levenshtein(v, w, Rational(2), Rational(3)));
    CHECK(evaluate(dtw, v, w) == oracle::dtw(v, w));
    CHECK(evaluate(edit, v, w) == evaluate(edit, w, v));
    CHECK(evaluate(dtw, v, w) == evaluate(dtw, w, v));
  }
}

TEST_CASE("closed forms on random rational pairs") {
  std::mt19937_64 rng(12);
  Raa ham = build_metric(MetricKind::Hamming);
  Raa man = build_metric(MetricKind::Manhattan);
  Raa ll = build_metric(MetricKind::LastLetter);
  Raa th = build_metric(parse_metric("threshold_hamming:3/2"));
  for (int i = 0; i < 300; ++i) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
    Sequence v = oracle::random_rational_seq(rng, n), w = oracle::random_rational_seq(rng, n);
    if (i % 3 == 0 && n > 0) w = v, w.back() = oracle::random_rational_seq(rng, 1)[0];
    if (i % 7 == 0) w = oracle::random_rational_seq(rng, n + 1);
    CHECK(evaluate(ham, v, w) == oracle::hamming(v, w));
    CHECK(evaluate(man, v, w) == oracle::manhattan(v, w));
    CHECK(evaluate(ll, v, w) == oracle::last_letter(v, w));
    CHECK(evaluate(th, v, w) == oracle::threshold_hamming(v, w, Rational(3, 2)));
  }
}

TEST_CASE("restricted metrics") {
  using fx::at;
  using fx::C;
  using fx::R;
  Raa edit = build_metric(MetricKind::Edit);
  Dra universal(1, 0, 0, {true}, {{0, {}, {}, 0}});
  Dra empty(1, 0, 0, {false}, {{0, {}, {}, 0}});
  // strictly increasing sequences
  Dra inc(1, 1, 0, {true}, {{0, {at(R(0), Cmp::Lt, C())}, {{0, C()}}, 0}});
  Raa same = restrict_metric(edit, universal, universal);
  Raa none = restrict_metric(edit, universal, empty);
  Raa up = restrict_metric(edit, universal, inc);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    Sequence v = oracle::random_seq(rng, 0, 4, 0, 3), w = oracle::random_seq(rng, 0, 4, 0, 3);
    CHECK(evaluate(same, v, w) == evaluate(edit, v, w));
    CHECK_FALSE(evaluate(none, v, w).finite());
    bool w_up = accepts(inc, w);
    CHECK(evaluate(up, v, w) == (w_up ? evaluate(edit, v, w) : ExtendedCost::infinity()));
  }
  CHECK_FALSE(evaluate(up, seq({1, 2}), seq({2, 1})).finite());
  CHECK(evaluate(up, seq({1, 2}), seq({1, 3})) == ExtendedCost(Rational(1)));
}

TEST_CASE("raa serialization round trip") {
  for (auto k : {MetricKind::Hamming, MetricKind::Edit, MetricKind::Dtw, MetricKind::LastLetter}) {
    Raa r = build_metric(k);
    CHECK(parse_raa(serialize(r)) == r);
  }
  Raa th = build_metric(parse_metric("threshold_hamming:2"));
  CHECK(parse_raa(serialize(th)) == th);
}
