#pragma once

// Passive DRA synthesis through an SMT solver. The sample set and an
// automaton shape (n states, k registers, c constant slots) are encoded in
// SMT-LIB v2 over booleans and linear real arithmetic; a model is decoded
// back into a Dra. Guards are intervals from the shared guard lattice.
//
// Variables: t_p_g (state p has a transition with guard shape g), y_p_g_q
// (its target), b_p_g_i_s (register i takes update source s), f_q
// (accepting), x_u_q (prefix u reaches q), v_u_i_m (register i after u holds
// the m-th value that can occur there: 0, a letter of u or a constant slot),
// h_u_p_g (the transition (p, g) fires on the last letter of u) and C_j
// (constant slots). A transition (p, g, psi, q) of the automaton is the
// conjunction t_p_g, y_p_g_q and the b literals of psi.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regrobust/automata.hpp"
#include "regrobust/guard_lattice.hpp"
#include "regrobust/samples.hpp"

namespace regrobust {

struct SynthesisParams {
  int n = 1;
  int k = 0;
  int c = 0;
  // When set, constant slot j is fixed to (*constant_pool)[j] (size >= c).
  std::optional<std::vector<Rational>> constant_pool;
  Rational constant_bound = Rational(1000000);  // free slots lie in [-bound, bound]
};

// Declarations and assertions, without (check-sat).
std::string encode(const SampleSet& s, const SynthesisParams& p);

struct DecodedModel {
  Dra dra;
  std::vector<Rational> constants;
  std::vector<std::pair<int, int>> origin;  // (state, shape index) per transition
};

// Parses a (get-model) response. Throws MalformedModel.
DecodedModel decode_model_full(const std::string& model_text, const SynthesisParams& p);
Dra decode_model(const std::string& model_text, const SynthesisParams& p);

// Clause forbidding shapes g1 and g2 together at state p whenever their
// intervals can share a letter (exact, in terms of the constant slots).
std::string blocking_clause(int p, int g1, int g2, const SynthesisParams& params);

bool validate_consistency(const Dra& dra, const SampleSet& s);

struct SolverConfig {
  // Command line of an SMT-LIB v2 solver reading the script on stdin.
  // Defaults to $REGROBUST_SOLVER, else "z3 -in -smt2".
  std::string command;
  double timeout = 30;  // seconds per (check-sat)
};

std::string default_solver_command();

class SmtSession {
 public:
  explicit SmtSession(const SolverConfig& cfg);
  ~SmtSession();
  SmtSession(const SmtSession&) = delete;
  SmtSession& operator=(const SmtSession&) = delete;

  void send(const std::string& text);
  std::string check_sat();  // "sat", "unsat" or "unknown"; SolverError otherwise
  std::string get_model();

 private:
  std::string read_response();
  struct Impl;
  Impl* impl_;
};

struct ShapeOutcome {
  std::string status;                 // "sat", "unsat" or "unknown"
  std::optional<DecodedModel> model;  // deterministic, set when sat
  int blocking_clauses = 0;
};

// One (n, k, c) shape: solve, decode, block overlapping guard pairs and
// re-solve until the decoded automaton is deterministic or unsat.
// deadline_seconds bounds the refinement loop (<= 0: no bound).
ShapeOutcome solve_shape(const SampleSet& s, const SynthesisParams& p, const SolverConfig& cfg,
                         double deadline_seconds = 0);

struct SynthesisOptions {
  int max_states = 4;
  int max_registers = 2;
  int max_constants = 2;
  std::optional<std::vector<Rational>> constant_pool;  // slot j = pool[j]; c <= |pool|
  SolverConfig solver;
  double budget = 300;  // seconds, wall clock
};

struct SynthesisResult {
  Dra dra;
  SynthesisParams params;
  std::vector<Rational> constants;
  int candidates = 0;        // (n, k, c) shapes tried
  int blocking_clauses = 0;  // lazy determinism refinements
  std::vector<std::string> log;
};

// Shapes in nondecreasing n + k + c, ties by (n, k, c). The result is
// re-executed on the samples and checked for determinism before it is
// returned. Throws BudgetExhausted.
SynthesisResult synthesize(const SampleSet& s, const SynthesisOptions& opts);

std::string smt_rational(const Rational& r);

}  // namespace regrobust
