#pragma once

#include <span>
#include <vector>

#include "regrobust/automata.hpp"

namespace regrobust {

enum class Move : std::uint8_t { Head1, Head2, Both };

const char* move_str(Move m);
Move parse_move(const std::string& s);
inline bool moves_head1(Move m) { return m != Move::Head2; }
inline bool moves_head2(Move m) { return m != Move::Head1; }

// acc += a1 * curr1 + a2 * curr2 + b
struct AccUpdate {
  Rational a1;
  Rational a2;
  Rational b;
  friend bool operator==(const AccUpdate&, const AccUpdate&) = default;
};

struct RaaTransition {
  int from = 0;
  Guard guard;
  Assignment assign;
  AccUpdate acc;
  Move mov = Move::Both;
  int to = 0;
  friend bool operator==(const RaaTransition&, const RaaTransition&) = default;
};

// Whether a transition needs curr1 / curr2 to be defined.
bool needs_head1(const RaaTransition& t);
bool needs_head2(const RaaTransition& t);

class Raa {
 public:
  Raa() = default;
  Raa(int num_states, int num_registers, int initial, std::vector<bool> accepting,
      std::vector<RaaTransition> transitions);

  int num_states() const { return num_states_; }
  int num_registers() const { return num_registers_; }
  int initial() const { return initial_; }
  bool accepting(int q) const { return accepting_[static_cast<std::size_t>(q)]; }
  const std::vector<bool>& accepting_set() const { return accepting_; }
  const std::vector<RaaTransition>& transitions() const { return transitions_; }
  const std::vector<int>& outgoing(int q) const { return out_[static_cast<std::size_t>(q)]; }

  friend bool operator==(const Raa& a, const Raa& b);

 private:
  int num_states_ = 0;
  int num_registers_ = 0;
  int initial_ = 0;
  std::vector<bool> accepting_;
  std::vector<RaaTransition> transitions_;
  std::vector<std::vector<int>> out_;
};

struct RaaConfiguration {
  int state = 0;
  int h1 = 1;
  int h2 = 1;
  std::vector<Rational> registers;
  Rational acc;
};

// Minimum accumulator value over accepting runs on (v, w); steps with a
// negative increment are not allowed.
ExtendedCost evaluate(const Raa& raa, std::span<const Rational> v, std::span<const Rational> w);

// Each x != y atom split into < and > (unsatisfiable guards dropped).
Raa split_disequalities(const Raa& raa);

}  // namespace regrobust
