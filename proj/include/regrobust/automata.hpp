#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regrobust/rational.hpp"

namespace regrobust {

using Sequence = std::vector<Rational>;

enum class OperandKind : std::uint8_t { Reg, Curr, Curr1, Curr2, Const };

struct Operand {
  OperandKind kind = OperandKind::Const;
  int index = 0;  // register index when kind == Reg
  Rational value;  // when kind == Const

  static Operand reg(int i) { return {OperandKind::Reg, i, {}}; }
  static Operand curr() { return {OperandKind::Curr, 0, {}}; }
  static Operand curr1() { return {OperandKind::Curr1, 0, {}}; }
  static Operand curr2() { return {OperandKind::Curr2, 0, {}}; }
  static Operand constant(Rational v) { return {OperandKind::Const, 0, std::move(v)}; }

  bool is_const() const { return kind == OperandKind::Const; }
  friend bool operator==(const Operand&, const Operand&) = default;
};

enum class Cmp : std::uint8_t { Lt, Le, Eq, Ne, Gt, Ge };

const char* cmp_str(Cmp c);
Cmp parse_cmp(const std::string& s);
// a op b  <=>  b mirror(op) a
Cmp mirror(Cmp c);
// closure: strict -> non-strict
Cmp relax(Cmp c);
bool compare(const Rational& a, Cmp op, const Rational& b);

// lhs op rhs + offset. A nonzero offset is only used by metric automata
// (e.g. |curr1 - curr2| > c); DRAs always have offset 0.
struct GuardAtom {
  Operand lhs;
  Cmp op = Cmp::Eq;
  Operand rhs;
  Rational offset;
  friend bool operator==(const GuardAtom&, const GuardAtom&) = default;
};

using Guard = std::vector<GuardAtom>;  // conjunction, empty = true

struct Update {
  int target = 0;
  Operand src;
  friend bool operator==(const Update&, const Update&) = default;
};

using Assignment = std::vector<Update>;

struct Transition {
  int from = 0;
  Guard guard;
  Assignment assign;
  int to = 0;
  friend bool operator==(const Transition&, const Transition&) = default;
};

std::string to_string(const Operand& o);
std::string to_string(const GuardAtom& a);
std::string to_string(const Guard& g);
std::string to_string(const Assignment& a);

// Values visible to a guard. Null pointers mark undefined letters.
struct Env {
  const Rational* regs = nullptr;
  const Rational* curr = nullptr;
  const Rational* curr1 = nullptr;
  const Rational* curr2 = nullptr;
};

const Rational* resolve(const Operand& o, const Env& env);
bool holds(const GuardAtom& a, const Env& env);
bool holds(const Guard& g, const Env& env);
// Parallel assignment: every source reads the pre-step values.
void apply(const Assignment& a, const Env& env, std::span<const Rational> before,
           std::span<Rational> after);

bool references(const Guard& g, OperandKind k);
bool references(const Assignment& a, OperandKind k);

class Dra {
 public:
  Dra() = default;
  Dra(int num_states, int num_registers, int initial, std::vector<bool> accepting,
      std::vector<Transition> transitions);

  int num_states() const { return num_states_; }
  int num_registers() const { return num_registers_; }
  int initial() const { return initial_; }
  bool accepting(int q) const { return accepting_[static_cast<std::size_t>(q)]; }
  const std::vector<bool>& accepting_set() const { return accepting_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<int>& outgoing(int q) const { return out_[static_cast<std::size_t>(q)]; }

  Dra with_accepting(std::vector<bool> acc) const;
  // Replaces all outgoing transitions of q; the new block takes the position
  // of the old one, so replacing a block by itself is the identity.
  Dra with_outgoing(int q, std::vector<Transition> replacement) const;

  friend bool operator==(const Dra& a, const Dra& b);

 private:
  int num_states_ = 0;
  int num_registers_ = 0;
  int initial_ = 0;
  std::vector<bool> accepting_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<int>> out_;
};

struct Configuration {
  int state = 0;
  std::vector<Rational> registers;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct TraceStep {
  static constexpr int kEnd = -1;    // input fully consumed
  static constexpr int kDeath = -2;  // no enabled transition
  Configuration config;
  int transition = kEnd;
};

struct RunResult {
  bool accepted = false;
  bool died = false;
  std::vector<TraceStep> trace;
};

RunResult run(const Dra& dra, std::span<const Rational> seq);
bool accepts(const Dra& dra, std::span<const Rational> seq);

// One step from (state, regs); returns the fired transition index or -1 on
// run-death. regs is updated in place, scratch is reused storage.
int step(const Dra& dra, int& state, std::vector<Rational>& regs, const Rational& letter,
         std::vector<Rational>& scratch);

}  // namespace regrobust
