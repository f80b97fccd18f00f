#pragma once

// Order constraints over (Q, <, =): atoms compare variables and constants.
// Two independent decision routes are provided. satisfiable() uses a
// strict/non-strict transitive closure; the cell routines enumerate order
// types (one representative point per total preorder of the variables
// relative to the constants).

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "regrobust/automata.hpp"

namespace regrobust {

struct OTerm {
  int var = -1;  // >= 0: variable index, otherwise the constant `value`
  Rational value;
  bool is_var() const { return var >= 0; }
  static OTerm variable(int i) { return {i, {}}; }
  static OTerm constant(Rational v) { return {-1, std::move(v)}; }
};

struct OAtom {
  OTerm lhs;
  Cmp op = Cmp::Eq;
  OTerm rhs;
};

bool satisfiable(std::span<const OAtom> atoms);

// Calls visit(values) once per order type of num_vars variables relative to
// the constants; visit returns false to stop early.
void for_each_cell(int num_vars, std::span<const Rational> constants,
                   const std::function<bool(const std::vector<Rational>&)>& visit);

bool holds(const OAtom& a, std::span<const Rational> values);

// First satisfying point found by cell enumeration, over all num_vars
// variables (unconstrained ones are set to 0).
std::optional<std::vector<Rational>> find_model(std::span<const OAtom> atoms, int num_vars);

// The complete order type of `values` (for the listed variables) relative to
// `constants`, as a chain of < and = atoms. Constant-constant atoms dropped.
std::vector<OAtom> cell_type(std::span<const int> vars, std::span<const Rational> values,
                             std::span<const Rational> constants);

// Guard <-> order atoms. Registers 0..k-1 map to variables 0..k-1, curr to k,
// curr1 to k+1 and curr2 to k+2. Offsets are folded into constants; an
// offset between two variables cannot be expressed and throws.
std::vector<OAtom> to_order_atoms(const Guard& g, int k);
Guard to_guard(std::span<const OAtom> atoms, int k);
std::vector<Rational> guard_constants(const Guard& g);

}  // namespace regrobust
