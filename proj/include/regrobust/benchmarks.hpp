#pragma once

// Ground-truth automata for the eighteen benchmark languages and the
// random-walk sampler that produces labelled datasets from them.
//
// L1..L7 are Tomita languages over two symbolic letters a < b: a is bound to
// the first letter, b to the first later letter above it; a letter equal to
// neither (or a later letter below a before b is bound) kills the run. L1 is
// the one-register automaton "0 <= curr <= 5, then equal letters".
// S1..S11 are order patterns over rational sequences.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "regrobust/automata.hpp"
#include "regrobust/samples.hpp"

namespace regrobust {

enum class BenchmarkId { L1, L2, L3, L4, L5, L6, L7, S1, S2, S3, S4, S5, S6, S7, S8, S9, S10, S11 };

const std::vector<BenchmarkId>& all_benchmarks();
std::string benchmark_name(BenchmarkId id);
BenchmarkId parse_benchmark(const std::string& name);  // InvalidArgument
std::string benchmark_description(BenchmarkId id);

Dra ground_truth(BenchmarkId id);

struct LabelledExample {
  Sequence seq;
  bool accepted = false;
};

// Hand-labelled membership examples shipped with every fixture.
std::vector<LabelledExample> hand_examples(BenchmarkId id);

// {"kind":"dra", ..., "name":..., "description":..., "examples":[...]}
std::string fixture_json(BenchmarkId id);

// Letter for one step: a value satisfying guard g under the register values,
// on the 1/100 grid where the cell allows it. nullopt when g is empty there.
std::optional<Rational> instantiate_letter(const Guard& g, const std::vector<Rational>& regs,
                                           std::mt19937_64& rng);

class MarkovSampler {
 public:
  // noise: probability of taking a deviation edge (a letter no transition of
  // the current state accepts) where one exists.
  MarkovSampler(Dra dra, double noise, int max_length, std::uint64_t seed);

  // One walk of uniform length in [1, max_length], labelled by the automaton.
  LabelledExample draw();

  const Dra& dra() const { return dra_; }
  int max_length() const { return max_length_; }

 private:
  Rational step_letter(int state, const std::vector<Rational>& regs);

  Dra dra_;
  Dra completed_;
  double noise_;
  int max_length_;
  std::mt19937_64 rng_;
};

MarkovSampler build_sampler(BenchmarkId id, double noise, int max_length, std::uint64_t seed);

struct LabelledDataset {
  std::vector<LabelledExample> records;  // in draw order, no duplicates
  std::size_t positives = 0;
  std::size_t negatives = 0;
  SampleSet sample_set() const;
};

// Draws until both quotas are met; surplus draws of a full class and
// repeated sequences are discarded. max_attempts = 0 selects
// 1000 * (n_pos + n_neg) + 10000. Throws QuotaUnreachable.
LabelledDataset generate(MarkovSampler& sampler, std::size_t n_pos, std::size_t n_neg,
                         std::size_t max_attempts = 0);

}  // namespace regrobust
