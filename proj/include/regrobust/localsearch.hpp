#pragma once

// Hill-climbing DRA synthesis over a precomputed space of deterministic
// outgoing-transition sets, scored by accuracy on a labelled sample set.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "regrobust/automata.hpp"
#include "regrobust/samples.hpp"

namespace regrobust {

// Accuracy (correct / total) by running every sample. EmptySampleSet.
Rational score(const Dra& dra, const SampleSet& s);
std::size_t correct_serial(const Dra& dra, const SampleSet& s);
std::size_t correct_parallel(const Dra& dra, const SampleSet& s);  // OpenMP

// The curr axis is cut at one register (cells <, =, > merged into at most
// max_cells groups) or at the sorted constants (likewise); every cell of a
// partition then either goes to (target, assignment) or has no transition.
struct SearchSpace {
  int n = 1;
  int k = 0;
  std::vector<Rational> constants;
  int max_cells = 3;
  std::vector<std::vector<Guard>> partitions;  // cells pairwise disjoint
  std::vector<Assignment> assignments;          // every register update map

  static SearchSpace build(int n, int k, std::vector<Rational> constants, int max_cells = 3);
  // per cell: n * |assignments| transitions plus "no transition"
  int cell_options() const { return n * static_cast<int>(assignments.size()) + 1; }
  double catalog_size() const;  // per state
};

struct CatalogChoice {
  int partition = 0;
  std::vector<int> cells;  // option per cell, cell_options()-1 = none
  friend bool operator==(const CatalogChoice&, const CatalogChoice&) = default;
};

CatalogChoice random_choice(const SearchSpace& space, std::mt19937_64& rng);
std::vector<Transition> catalog_entry(const SearchSpace& space, int q, const CatalogChoice& c);
// The choice that reproduces q's current block, if the block is in the space.
std::optional<CatalogChoice> find_choice(const SearchSpace& space, const Dra& dra, int q);
Dra random_automaton(const SearchSpace& space, std::mt19937_64& rng);

Dra op_f(const Dra& dra, int q);
Dra op_delta(const Dra& dra, int q, const SearchSpace& space, const CatalogChoice& c);

struct SearchConfig {
  double max_time = 60.0;  // seconds, per climb
  std::size_t max_iteration = 100000;
  int restarts = 5;
  std::uint64_t seed = 42;
};

struct ClimbResult {
  Dra dra;
  Rational score;
  std::size_t iterations = 0;
  std::vector<Rational> trace;  // best score at the start and after every improvement
};

// One run of the hill climber from init with the given seed.
ClimbResult hill_climb(const SampleSet& s, const SearchSpace& space, const SearchConfig& cfg, const Dra& init,
                       std::uint64_t seed);

struct LocalSearchResult {
  Dra dra;
  Rational score;
  std::vector<ClimbResult> climbs;  // one per restart, in restart order
};

// Restart r starts from random_automaton seeded with seed + r and climbs
// with the same seed; restarts run in parallel. The best score wins, ties
// go to the lexicographically smallest serialization.
LocalSearchResult local_search(const SampleSet& s, const SearchSpace& space, const SearchConfig& cfg);

}  // namespace regrobust
