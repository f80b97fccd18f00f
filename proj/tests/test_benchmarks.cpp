#include <doctest.h>

#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "oracles.hpp"
#include "regrobust/benchmarks.hpp"
#include "regrobust/dra_ops.hpp"
#include "regrobust/errors.hpp"
#include "regrobust/serialize.hpp"

using namespace regrobust;

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Sequence seq(std::initializer_list<Rational> xs) { return Sequence(xs); }

// a = first letter, b = first letter different from a (must be larger);
// nullopt when the sequence is not over such a two-letter alphabet.
std::optional<std::string> symbolic_word(const Sequence& w) {
  std::string out;
  std::optional<Rational> a, b;
  for (const auto& x : w) {
    if (!a) a = x;
    if (x == *a) {
      out += 'a';
      continue;
    }
    if (!b) {
      if (x < *a) return std::nullopt;
      b = x;
    }
    if (x != *b) return std::nullopt;
    out += 'b';
  }
  return out;
}

bool tomita_member(BenchmarkId id, const Sequence& w) {
  auto word = symbolic_word(w);
  if (!word) return false;
  const std::string& t = *word;
  auto count = [&](char c) { return static_cast<int>(std::count(t.begin(), t.end(), c)); };
  switch (id) {
    case BenchmarkId::L2: return std::regex_match(t, std::regex("(ab)*"));
    case BenchmarkId::L3: return std::regex_match(t, std::regex("a(aa)*(bb)*"));
    case BenchmarkId::L4: return t.find("aaa") == std::string::npos && t.find("bbb") == std::string::npos;
    case BenchmarkId::L5: return !t.empty() && t[0] == 'a' && count('a') % 2 == 0 && count('b') % 2 == 0;
    case BenchmarkId::L6: return !t.empty() && t[0] == 'a' && (count('a') - count('b')) % 3 == 0;
    case BenchmarkId::L7: return std::regex_match(t, std::regex("a+b*a*b*"));
    default: return false;
  }
}

// Direction string of consecutive differences: '+', '-' or '='.
std::string directions(const Sequence& w) {
  std::string d;
  for (std::size_t i = 1; i < w.size(); ++i) d += w[i] > w[i - 1] ? '+' : w[i] < w[i - 1] ? '-' : '=';
  return d;
}

bool pattern_member(BenchmarkId id, const Sequence& w) {
  const std::string d = directions(w);
  switch (id) {
    case BenchmarkId::L1:
      return w.empty() || (Rational(0) <= w[0] && w[0] <= Rational(5) &&
                           std::all_of(w.begin(), w.end(), [&](const Rational& x) { return x == w[0]; }));
    case BenchmarkId::S1: return std::regex_match(d, std::regex("\\+*"));
    case BenchmarkId::S2: return std::regex_match(d, std::regex("-*"));
    case BenchmarkId::S3: return std::regex_match(d, std::regex("[-=]*"));
    case BenchmarkId::S4: return std::regex_match(d, std::regex("[+=]*"));
    case BenchmarkId::S5: return std::regex_match(d, std::regex("\\++-+"));
    case BenchmarkId::S6: return std::regex_match(d, std::regex("-+\\++"));
    case BenchmarkId::S7: return std::regex_match(d, std::regex("(\\++-+){2}"));
    case BenchmarkId::S8: return std::regex_match(d, std::regex("(\\++-+){3}"));
    default: return tomita_member(id, w);
  }
}

bool has_reference(BenchmarkId id) {
  return id != BenchmarkId::S9 && id != BenchmarkId::S10 && id != BenchmarkId::S11;
}

Sequence negate(Sequence w) {
  for (auto& x : w) x = -x;
  return w;
}

}  // namespace

TEST_CASE("benchmark ids") {
  CHECK(all_benchmarks().size() == 18);
  for (auto id : all_benchmarks()) CHECK(parse_benchmark(benchmark_name(id)) == id);
  CHECK_THROWS_AS(parse_benchmark("L8"), InvalidArgument);
}

TEST_CASE("ground truth fixtures are deterministic and match their examples") {
  for (auto id : all_benchmarks()) {
    Dra a = ground_truth(id);
    CAPTURE(benchmark_name(id));
    CHECK(check_determinism(a).empty());
    auto ex = hand_examples(id);
    CHECK(ex.size() >= 5);
    for (const auto& e : ex) CHECK_MESSAGE(accepts(a, e.seq) == e.accepted, sequence_str(e.seq));
    for (const auto& e : ex)
      if (has_reference(id)) CHECK_MESSAGE(pattern_member(id, e.seq) == e.accepted, sequence_str(e.seq));
  }
  for (auto id : {BenchmarkId::S5, BenchmarkId::S6, BenchmarkId::S7, BenchmarkId::S8, BenchmarkId::S10,
                  BenchmarkId::S11})
    CHECK(hand_examples(id).size() >= 10);
}

TEST_CASE("named membership examples") {
  CHECK(accepts(ground_truth(BenchmarkId::S1), seq({1, 2, 3})));
  CHECK_FALSE(accepts(ground_truth(BenchmarkId::S1), seq({2, 1})));
  CHECK(accepts(ground_truth(BenchmarkId::L1), seq({2, 2, 2})));
  CHECK_FALSE(accepts(ground_truth(BenchmarkId::L1), seq({2, 3})));
  CHECK(accepts(ground_truth(BenchmarkId::S9), seq({0, -1, 5, 3, 7, 9, 6, 8})));
  CHECK_FALSE(accepts(ground_truth(BenchmarkId::S9), seq({0, -1, 5, 3, 7, 9, 6, 3})));
}

TEST_CASE("ground truth agrees with reference membership on random words") {
  std::mt19937_64 rng(3);
  for (auto id : all_benchmarks()) {
    if (!has_reference(id)) continue;
    Dra a = ground_truth(id);
    CAPTURE(benchmark_name(id));
    const bool symbolic = id >= BenchmarkId::L2 && id <= BenchmarkId::L7;
    for (int i = 0; i < 3000; ++i) {
      Sequence w;
      if (symbolic) {
        // mostly two letters, sometimes a third
        int len = std::uniform_int_distribution<int>(0, 9)(rng);
        int third = std::uniform_int_distribution<int>(0, 9)(rng);
        for (int j = 0; j < len; ++j) {
          int c = std::uniform_int_distribution<int>(0, 1)(rng);
          if (third == 0 && j == len - 1) c = 2;
          w.push_back(Rational(std::array{1, 4, 3}[static_cast<std::size_t>(c)]));
        }
      } else {
        w = oracle::random_seq(rng, 0, 8, -2, 6);
      }
      CHECK_MESSAGE(accepts(a, w) == pattern_member(id, w), sequence_str(w));
    }
  }
}

TEST_CASE("lower highs and lower lows mirror the running example") {
  std::mt19937_64 rng(4);
  Dra s9 = ground_truth(BenchmarkId::S9), s11 = ground_truth(BenchmarkId::S11);
  for (int i = 0; i < 5000; ++i) {
    Sequence w = oracle::random_seq(rng, 1, 9, -4, 4);
    CHECK(accepts(s11, w) == accepts(s9, negate(w)));
  }
}

TEST_CASE("shipped fixture files are current") {
  for (auto id : all_benchmarks()) {
    const std::string path = std::string(REGROBUST_SOURCE_DIR) + "/benchmarks/" + lower(benchmark_name(id)) + ".json";
    CAPTURE(path);
    std::string text = read_file(path);
    CHECK(text == fixture_json(id));
    CHECK(parse_dra(text) == ground_truth(id));
    json j = parse_json_text(text);
    for (const auto& e : j["examples"])
      CHECK(accepts(ground_truth(id), sequence_from_json(e["seq"])) == (e["label"].get<int>() == 1));
  }
}

TEST_CASE("letter instantiation") {
  std::mt19937_64 rng(1);
  using fxGuard = Guard;
  std::vector<Rational> regs{Rational(1), Rational(2)};
  auto C = Operand::curr();
  auto R = [](int i) { return Operand::reg(i); };
  auto at = [](Operand l, Cmp op, Operand r) { return GuardAtom{l, op, r, {}}; };
  fxGuard between{at(R(0), Cmp::Lt, C), at(C, Cmp::Lt, R(1))};
  for (int i = 0; i < 200; ++i) {
    auto x = instantiate_letter(between, regs, rng);
    REQUIRE(x);
    CHECK(*x > Rational(1));
    CHECK(*x < Rational(2));
    CHECK((*x * Rational(100)).is_integer());
  }
  std::vector<Rational> odd{Rational(1, 3)};
  for (int i = 0; i < 200; ++i) {
    auto up = instantiate_letter({at(R(0), Cmp::Lt, C)}, odd, rng);
    auto down = instantiate_letter({at(C, Cmp::Le, R(0))}, odd, rng);
    REQUIRE(up);
    REQUIRE(down);
    CHECK(*up - odd[0] >= Rational(1));
    CHECK(*up - odd[0] <= Rational(3, 2) + Rational(1, 100));
    CHECK(odd[0] - *down >= Rational(1));
    CHECK(odd[0] - *down <= Rational(3, 2) + Rational(1, 100));
  }
  CHECK(instantiate_letter({at(C, Cmp::Eq, R(1))}, regs, rng) == std::optional<Rational>(Rational(2)));
  CHECK_FALSE(instantiate_letter({at(R(1), Cmp::Lt, C), at(C, Cmp::Lt, R(0))}, regs, rng));
  CHECK_FALSE(instantiate_letter({at(R(1), Cmp::Lt, R(0))}, regs, rng));
  CHECK_FALSE(instantiate_letter({at(C, Cmp::Gt, R(0)), at(C, Cmp::Le, R(0))}, regs, rng));
  // a narrow cell with a disequality inside
  std::vector<Rational> tight{Rational(0), Rational(1, 1000)};
  fxGuard narrow{at(R(0), Cmp::Lt, C), at(C, Cmp::Lt, R(1)), at(C, Cmp::Ne, Operand::constant(Rational(1, 2000)))};
  auto y = instantiate_letter(narrow, tight, rng);
  REQUIRE(y);
  CHECK(*y > Rational(0));
  CHECK(*y < Rational(1, 1000));
  CHECK(*y != Rational(1, 2000));
}

TEST_CASE("sampler labels equal ground-truth membership") {
  for (auto id : all_benchmarks()) {
    CAPTURE(benchmark_name(id));
    MarkovSampler sm = build_sampler(id, 0.5, 20, 7 + static_cast<std::uint64_t>(id));
    Dra a = ground_truth(id);
    std::size_t pos = 0;
    const int draws = 10000 / 18 + 1;
    for (int i = 0; i < draws; ++i) {
      auto e = sm.draw();
      REQUIRE_FALSE(e.seq.empty());
      CHECK(e.seq.size() <= 20);
      CHECK(e.accepted == accepts(a, e.seq));
      if (has_reference(id)) CHECK(e.accepted == pattern_member(id, e.seq));
      pos += e.accepted;
    }
    CHECK(pos < static_cast<std::size_t>(draws));
  }
}

TEST_CASE("noise-free walks on an all-accepting automaton are positive") {
  MarkovSampler sm = build_sampler(BenchmarkId::L1, 0.0, 30, 1);
  for (int i = 0; i < 500; ++i) CHECK(sm.draw().accepted);
  MarkovSampler noisy = build_sampler(BenchmarkId::L1, 0.5, 30, 1);
  std::size_t pos = 0;
  for (int i = 0; i < 500; ++i) pos += noisy.draw().accepted;
  CHECK(pos > 0);
  CHECK(pos < 500);
}

TEST_CASE("dataset generation") {
  MarkovSampler a = build_sampler(BenchmarkId::S2, 0.5, 50, 11);
  auto d = generate(a, 100, 100);
  CHECK(d.positives == 100);
  CHECK(d.negatives == 100);
  Dra s2 = ground_truth(BenchmarkId::S2);
  for (const auto& r : d.records) {
    CHECK(r.accepted == accepts(s2, r.seq));
    CHECK(r.seq.size() <= 50);
  }
  SampleSet ss = d.sample_set();
  CHECK_NOTHROW(ss.validate());
  CHECK(consistent(s2, ss));

  MarkovSampler b = build_sampler(BenchmarkId::S2, 0.5, 50, 11);
  CHECK(samples_jsonl(generate(b, 100, 100).sample_set()) == samples_jsonl(ss));
  MarkovSampler c = build_sampler(BenchmarkId::S2, 0.5, 50, 12);
  CHECK(samples_jsonl(generate(c, 100, 100).sample_set()) != samples_jsonl(ss));

  MarkovSampler e = build_sampler(BenchmarkId::S9, 0.5, 50, 1);
  CHECK(generate(e, 0, 0).records.empty());
  auto big = generate(e, 369, 369);
  CHECK(big.positives == 369);
  CHECK(big.negatives == 369);

  // every length-1 word is strictly increasing: no negatives exist
  MarkovSampler f = build_sampler(BenchmarkId::S1, 0.5, 1, 3);
  CHECK_THROWS_AS(generate(f, 0, 1, 500), QuotaUnreachable);
}

TEST_CASE("sample set JSON lines") {
  SampleSet s{{seq({1, Rational(5, 2)})}, {seq({-1})}};
  std::string text = samples_jsonl(s);
  CHECK(text == "{\"label\":1,\"seq\":[\"1/1\",\"5/2\"]}\n{\"label\":0,\"seq\":[\"-1/1\"]}\n");
  std::istringstream in(text + "\n{\"seq\":[\"0.5\", 3],\"label\":true}\n");
  SampleSet back = read_samples(in);
  CHECK(back.positives.size() == 2);
  CHECK(back.positives[1] == seq({Rational(1, 2), 3}));
  CHECK(back.negatives == s.negatives);
  std::istringstream bad("{\"seq\":[\"1\"],\"label\":2}\n");
  CHECK_THROWS_AS(read_samples(bad), ParseError);
  std::istringstream broken("\n{\"seq\":[\n");
  try {
    read_samples(broken);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  SampleSet clash{{seq({1})}, {seq({1})}};
  CHECK_THROWS_AS(clash.validate(), InvalidArgument);
  SampleSet empty_seq{{Sequence{}}, {}};
  CHECK_THROWS_AS(empty_seq.validate(), InvalidArgument);
}
