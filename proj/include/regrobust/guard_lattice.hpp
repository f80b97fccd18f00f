#pragma once

// Interval guards low (<|<=) curr (<|<=) high shared by both learners.
// An endpoint is absent (unbounded), a constant slot or a register.

#include <string>
#include <vector>

#include "regrobust/automata.hpp"

namespace regrobust {

enum class EndKind : std::uint8_t { None, Const, Reg };

struct Endpoint {
  EndKind kind = EndKind::None;
  int index = 0;
  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct GuardShape {
  Endpoint low;
  Endpoint high;
  bool low_strict = false;
  bool high_strict = false;
  friend bool operator==(const GuardShape&, const GuardShape&) = default;
};

// All shapes over k registers and c constant slots, without those that are
// empty whatever the values (same endpoint on both sides with a strict end).
std::vector<GuardShape> enumerate_shapes(int k, int c);

Guard shape_guard(const GuardShape& s, const std::vector<Rational>& constants);
std::string to_string(const GuardShape& s);

// Register update source: 0..k-1 register, k..k+c-1 constant slot, k+c curr.
Operand update_source(int code, int k, const std::vector<Rational>& constants);
// Per-register codes -> assignment; "keep" entries are omitted.
Assignment make_assignment(const std::vector<int>& codes, int k, const std::vector<Rational>& constants);

}  // namespace regrobust
