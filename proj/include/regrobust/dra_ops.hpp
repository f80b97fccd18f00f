#pragma once

#include <vector>

#include "regrobust/automata.hpp"

namespace regrobust {

struct DeterminismViolation {
  int state = 0;
  int first = 0;   // transition indices
  int second = 0;
  std::vector<Rational> registers;  // witness valuation
  Rational letter;
};

std::vector<DeterminismViolation> check_determinism(const Dra& dra);

// Is the conjunction of the two guards satisfiable for some valuation and letter?
bool guards_overlap(const Guard& a, const Guard& b, int k);
bool guard_satisfiable(const Guard& g, int k);

// Adds a non-accepting sink (index num_states) and routes every uncovered
// order-type cell of every state to it.
Dra complete(const Dra& dra);
Dra complement(const Dra& dra);

// Each x != y atom becomes two transitions (x < y, x > y); unsatisfiable
// results are dropped.
Dra split_disequalities(const Dra& dra);
std::vector<Guard> split_guard(const Guard& g);

bool has_disequality(const Guard& g);

}  // namespace regrobust
