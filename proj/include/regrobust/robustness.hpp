#pragma once

// Robustness of a DRA at a sequence v under a metric RAA.
//
// The metric is projected onto v (head-1 letters pinned, head-1 index folded
// into the state), multiplied with the DRA that recognises the flipped label,
// and searched for a cheapest accepting run. Letters of the second sequence
// are taken from a finite candidate set: a constant c of the instance plus an
// infinitesimal offset k*eps (k an integer). Offsets are compared exactly by
// the strict guards, while the cost of a path is the standard part of its
// accumulated weight. The minimum over paths is therefore the infimum of the
// flip cost, and a concrete witness is obtained by instantiating eps.

#include <functional>
#include <json.hpp>
#include <optional>
#include <vector>

#include "regrobust/automata.hpp"
#include "regrobust/raa.hpp"

namespace regrobust {

enum class Side { FlipToReject, FlipToAccept, Auto };
const char* side_str(Side s);
Side parse_side(const std::string& s);

struct BoundedProjectedRaa {
  Raa raa;                          // reads v on head 1, pinned by curr1 = v_i atoms
  Rational alpha;                   // |head-2 letter| <= alpha on consuming moves
  std::vector<int> head1_of_state;  // 0-based head-1 position, m = exhausted
  int m = 0;
  Sequence v;
};

// extra_constants: constants of the automaton the projection will be
// combined with (they enter the bound). delta absent: no cost cutoff.
BoundedProjectedRaa project_and_bound(const Raa& metric, const Sequence& v,
                                      const std::optional<Rational>& delta,
                                      const std::vector<Rational>& extra_constants = {});

// flip_target must be complete and free of disequalities.
BoundedProjectedRaa product(const BoundedProjectedRaa& bp, const Dra& flip_target);

// Strict comparisons relaxed to non-strict ones.
Raa closure(const Raa& raa);

// A letter c + k*eps. Exact mode keeps k; closed mode has k = 0 throughout.
struct HValue {
  Rational std;
  std::int64_t k = 0;
  friend bool operator==(const HValue&, const HValue&) = default;
  friend std::strong_ordering operator<=>(const HValue& a, const HValue& b) {
    if (auto c = a.std <=> b.std; c != 0) return c;
    return a.k <=> b.k;
  }
};

struct GraphVertex {
  int state = 0;                  // product state (includes head-1 index)
  std::vector<HValue> regs;
  std::optional<HValue> pending;  // head-2 letter read but not yet consumed
  bool consumed = false;          // at least one head-2 letter consumed
  friend bool operator==(const GraphVertex&, const GraphVertex&) = default;
  friend std::strong_ordering operator<=>(const GraphVertex& a, const GraphVertex& b);
};

struct GraphEdge {
  int from = 0;
  int to = 0;
  Rational weight;  // standard part of the increment, >= 0
  int transition = 0;
  std::optional<HValue> letter;
  bool fresh = false;     // letter chosen here (not a pending one)
  bool consumes = false;  // head 2 advances
};

enum class GraphMode { Exact, Closed };

struct CoverabilityGraph {
  GraphMode mode = GraphMode::Exact;
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;
  std::vector<std::vector<int>> out;
  int source = 0;
  std::vector<int> targets;
  std::vector<Rational> constants;  // standard parts of candidate letters
};

// Forward reachability from the source. Closed mode applies closure() and
// restricts letters to the constant set. Throws GraphLimitExceeded.
CoverabilityGraph build_graph(const BoundedProjectedRaa& p, GraphMode mode,
                              std::size_t max_vertices = 2'000'000);

struct GraphPath {
  std::vector<int> edges;
  Rational weight;
  int target = 0;
};

// Dijkstra with exact weights, ties broken by the vertex order.
std::optional<GraphPath> shortest_path(const CoverabilityGraph& g);

struct SearchResult {
  CoverabilityGraph graph;  // the explored part only
  std::optional<GraphPath> path;
};

// Dijkstra that expands vertices on demand. Stops at the first target, or
// (with a cutoff) once every unsettled vertex is at distance >= cutoff.
SearchResult search(const BoundedProjectedRaa& p, GraphMode mode, const std::optional<Rational>& cutoff,
                    std::size_t max_vertices = 2'000'000);

// Instantiates eps along an exact-mode path; check(w) re-verifies the
// candidate (label flip and cost < delta). Throws RefinementFailed.
Sequence refine_witness(const CoverabilityGraph& g, const BoundedProjectedRaa& p,
                        const GraphPath& path, const Rational& delta,
                        const std::function<bool(const Sequence&)>& check);

struct RobustnessQuery {
  Dra dra;
  Sequence v;
  Raa metric;
  Rational delta;
  Side side = Side::Auto;
  std::size_t max_vertices = 2'000'000;
};

struct Witness {
  Sequence w;
  Rational cost;            // evaluate(metric, v, w)
  Rational closed_optimum;  // path weight (infimum of the flip cost)
};

struct RobustnessVerdict {
  bool robust = true;
  Side side = Side::Auto;  // side actually searched
  bool v_accepted = false;
  ExtendedCost min_flip_cost;  // infinity when not found below delta
  std::optional<Witness> witness;
  Rational alpha;
  std::size_t graph_vertices = 0;
  std::size_t graph_edges = 0;
};

RobustnessVerdict check_robustness(const RobustnessQuery& q);
ExtendedCost min_flip_cost(const Dra& dra, const Sequence& v, const Raa& metric,
                           Side side = Side::Auto, std::size_t max_vertices = 2'000'000);

nlohmann::json verdict_json(const RobustnessVerdict& v);

}  // namespace regrobust
