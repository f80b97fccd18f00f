#include "regrobust/localsearch.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

#include "regrobust/dra_ops.hpp"
#include "regrobust/errors.hpp"
#include "regrobust/guard_lattice.hpp"
#include "regrobust/serialize.hpp"

namespace regrobust {

namespace {

bool classified(const Dra& dra, const Sequence& w, bool positive) { return accepts(dra, w) == positive; }

// Contiguous groupings of `atoms` ordered cells into 2..max_groups groups,
// as lists of [first, last] atom ranges.
std::vector<std::vector<std::pair<int, int>>> groupings(int atoms, int max_groups) {
  std::vector<std::vector<std::pair<int, int>>> out;
  // a grouping = set of cut positions in 1..atoms-1
  const int cuts = atoms - 1;
  for (std::uint32_t mask = 1; mask < (1u << cuts); ++mask) {
    if (std::popcount(mask) + 1 > max_groups) continue;
    std::vector<std::pair<int, int>> g;
    int start = 0;
    for (int i = 0; i < cuts; ++i)
      if (mask & (1u << i)) {
        g.push_back({start, i});
        start = i + 1;
      }
    g.push_back({start, atoms - 1});
    out.push_back(std::move(g));
  }
  return out;
}

// Atom cells around ordered pivots p_1 < ... < p_j: (-inf,p1), {p1},
// (p1,p2), ..., (pj,inf). Returns the guard of atoms first..last merged.
Guard merged_cell(const std::vector<Operand>& pivots, int first, int last) {
  const Operand curr = Operand::curr();
  Guard g;
  // atom 2t+1 is the point p_t+1 (0-based t), atom 2t is the open gap below it
  if (first > 0) {
    const Operand& p = pivots[static_cast<std::size_t>((first - 1) / 2)];
    g.push_back({p, first % 2 == 1 ? Cmp::Le : Cmp::Lt, curr, {}});
  }
  const int atoms = 2 * static_cast<int>(pivots.size()) + 1;
  if (last < atoms - 1) {
    const Operand& p = pivots[static_cast<std::size_t>(last / 2)];
    g.push_back({curr, last % 2 == 1 ? Cmp::Le : Cmp::Lt, p, {}});
  }
  if (first == last && first % 2 == 1) {
    g.clear();
    g.push_back({curr, Cmp::Eq, pivots[static_cast<std::size_t>(first / 2)], {}});
  }
  return g;
}

}  // namespace

std::size_t correct_serial(const Dra& dra, const SampleSet& s) {
  std::size_t n = 0;
  for (const auto& w : s.positives) n += classified(dra, w, true);
  for (const auto& w : s.negatives) n += classified(dra, w, false);
  return n;
}

std::size_t correct_parallel(const Dra& dra, const SampleSet& s) {
  const auto np = static_cast<std::ptrdiff_t>(s.positives.size());
  const auto total = static_cast<std::ptrdiff_t>(s.size());
  std::size_t n = 0;
#pragma omp parallel for reduction(+ : n) schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const bool pos = i < np;
    const Sequence& w = pos ? s.positives[static_cast<std::size_t>(i)] : s.negatives[static_cast<std::size_t>(i - np)];
    n += classified(dra, w, pos);
  }
  return n;
}

Rational score(const Dra& dra, const SampleSet& s) {
  if (s.empty()) throw EmptySampleSet("score of an empty sample set");
  return Rational(static_cast<std::int64_t>(correct_parallel(dra, s)), static_cast<std::int64_t>(s.size()));
}

SearchSpace SearchSpace::build(int n, int k, std::vector<Rational> constants, int max_cells) {
  if (n < 1 || k < 0 || max_cells < 1) throw InvalidArgument("search space needs n >= 1, k >= 0, max_cells >= 1");
  std::sort(constants.begin(), constants.end());
  constants.erase(std::unique(constants.begin(), constants.end()), constants.end());
  SearchSpace sp;
  sp.n = n;
  sp.k = k;
  sp.constants = constants;
  sp.max_cells = max_cells;
  sp.partitions.push_back({Guard{}});
  auto add_pivots = [&](const std::vector<Operand>& pivots) {
    const int atoms = 2 * static_cast<int>(pivots.size()) + 1;
    for (const auto& grouping : groupings(atoms, max_cells)) {
      std::vector<Guard> cells;
      for (auto [a, b] : grouping) cells.push_back(merged_cell(pivots, a, b));
      sp.partitions.push_back(std::move(cells));
    }
  };
  for (int i = 0; i < k; ++i) add_pivots({Operand::reg(i)});
  if (!constants.empty()) {
    std::vector<Operand> ps;
    for (const auto& c : constants) ps.push_back(Operand::constant(c));
    add_pivots(ps);
  }
  for (const auto& cells : sp.partitions)
    for (std::size_t a = 0; a < cells.size(); ++a)
      for (std::size_t b = a + 1; b < cells.size(); ++b)
        if (guards_overlap(cells[a], cells[b], k)) throw Error("search space: overlapping cells");

  const int c = static_cast<int>(constants.size());
  std::vector<int> codes(static_cast<std::size_t>(k), 0);
  const int radix = k + c + 1;
  for (;;) {
    sp.assignments.push_back(make_assignment(codes, k, constants));
    int i = 0;
    while (i < k && ++codes[static_cast<std::size_t>(i)] == radix) codes[static_cast<std::size_t>(i++)] = 0;
    if (i == k) break;
  }
  return sp;
}

double SearchSpace::catalog_size() const {
  double total = 0;
  for (const auto& p : partitions) total += std::pow(static_cast<double>(cell_options()), static_cast<double>(p.size()));
  return total;
}

CatalogChoice random_choice(const SearchSpace& space, std::mt19937_64& rng) {
  CatalogChoice c;
  c.partition = std::uniform_int_distribution<int>(0, static_cast<int>(space.partitions.size()) - 1)(rng);
  std::uniform_int_distribution<int> opt(0, space.cell_options() - 1);
  for (std::size_t i = 0; i < space.partitions[static_cast<std::size_t>(c.partition)].size(); ++i)
    c.cells.push_back(opt(rng));
  return c;
}

std::vector<Transition> catalog_entry(const SearchSpace& space, int q, const CatalogChoice& c) {
  const auto& cells = space.partitions.at(static_cast<std::size_t>(c.partition));
  if (c.cells.size() != cells.size()) throw InvalidArgument("catalog choice: wrong number of cells");
  const int na = static_cast<int>(space.assignments.size());
  std::vector<Transition> out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const int o = c.cells[i];
    if (o < 0 || o >= space.cell_options()) throw InvalidArgument("catalog choice: option out of range");
    if (o == space.cell_options() - 1) continue;
    out.push_back({q, cells[i], space.assignments[static_cast<std::size_t>(o % na)], o / na});
  }
  return out;
}

std::optional<CatalogChoice> find_choice(const SearchSpace& space, const Dra& dra, int q) {
  const int na = static_cast<int>(space.assignments.size());
  for (std::size_t p = 0; p < space.partitions.size(); ++p) {
    const auto& cells = space.partitions[p];
    CatalogChoice c{static_cast<int>(p), std::vector<int>(cells.size(), space.cell_options() - 1)};
    bool ok = true;
    for (int ti : dra.outgoing(q)) {
      const auto& t = dra.transitions()[static_cast<std::size_t>(ti)];
      auto cell = std::find(cells.begin(), cells.end(), t.guard);
      auto asg = std::find(space.assignments.begin(), space.assignments.end(), t.assign);
      if (cell == cells.end() || asg == space.assignments.end() || t.to >= space.n) {
        ok = false;
        break;
      }
      auto& slot = c.cells[static_cast<std::size_t>(cell - cells.begin())];
      if (slot != space.cell_options() - 1) {
        ok = false;
        break;
      }
      slot = t.to * na + static_cast<int>(asg - space.assignments.begin());
    }
    if (ok && catalog_entry(space, q, c) == [&] {
          std::vector<Transition> block;
          for (int ti : dra.outgoing(q)) block.push_back(dra.transitions()[static_cast<std::size_t>(ti)]);
          return block;
        }())
      return c;
  }
  return std::nullopt;
}

Dra random_automaton(const SearchSpace& space, std::mt19937_64& rng) {
  std::vector<Transition> ts;
  std::vector<bool> acc(static_cast<std::size_t>(space.n));
  // An empty accepting set is a dead start for strict hill climbing: no
  // transition change alters the score, so it is redrawn.
  do
    for (int q = 0; q < space.n; ++q) acc[static_cast<std::size_t>(q)] = std::bernoulli_distribution(0.5)(rng);
  while (std::none_of(acc.begin(), acc.end(), [](bool b) { return b; }));
  for (int q = 0; q < space.n; ++q) {
    auto block = catalog_entry(space, q, random_choice(space, rng));
    ts.insert(ts.end(), block.begin(), block.end());
  }
  return Dra(space.n, space.k, 0, std::move(acc), std::move(ts));
}

Dra op_f(const Dra& dra, int q) {
  std::vector<bool> acc = dra.accepting_set();
  acc.at(static_cast<std::size_t>(q)) = !acc[static_cast<std::size_t>(q)];
  return dra.with_accepting(std::move(acc));
}

Dra op_delta(const Dra& dra, int q, const SearchSpace& space, const CatalogChoice& c) {
  return dra.with_outgoing(q, catalog_entry(space, q, c));
}

ClimbResult hill_climb(const SampleSet& s, const SearchSpace& space, const SearchConfig& cfg, const Dra& init,
                       std::uint64_t seed) {
  if (s.empty()) throw EmptySampleSet("hill climbing on an empty sample set");
  std::mt19937_64 rng(seed);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t total = s.size();
  ClimbResult r{init, {}, 0, {}};
  std::size_t best = correct_serial(init, s);
  r.trace.push_back(Rational(static_cast<std::int64_t>(best), static_cast<std::int64_t>(total)));
  std::uniform_int_distribution<int> state(0, init.num_states() - 1);
  while (best < total && r.iterations < cfg.max_iteration) {
    if (std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > cfg.max_time) break;
    ++r.iterations;
    const bool flip = std::bernoulli_distribution(0.5)(rng);
    const int q = state(rng);
    Dra cand = flip ? op_f(r.dra, q) : op_delta(r.dra, q, space, random_choice(space, rng));
    const std::size_t c = correct_serial(cand, s);
    if (c > best) {
      best = c;
      r.dra = std::move(cand);
      r.trace.push_back(Rational(static_cast<std::int64_t>(best), static_cast<std::int64_t>(total)));
    }
  }
  r.score = r.trace.back();
  return r;
}

LocalSearchResult local_search(const SampleSet& s, const SearchSpace& space, const SearchConfig& cfg) {
  if (s.empty()) throw EmptySampleSet("local search on an empty sample set");
  if (cfg.restarts < 1) throw InvalidArgument("restarts must be at least 1");
  std::vector<ClimbResult> climbs(static_cast<std::size_t>(cfg.restarts));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < cfg.restarts; ++r) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
    std::mt19937_64 rng(seed);
    Dra init = random_automaton(space, rng);
    climbs[static_cast<std::size_t>(r)] = hill_climb(s, space, cfg, init, seed);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < climbs.size(); ++i) {
    const auto& a = climbs[i];
    const auto& b = climbs[best];
    if (a.score > b.score || (a.score == b.score && serialize(a.dra) < serialize(b.dra))) best = i;
  }
  return {climbs[best].dra, climbs[best].score, std::move(climbs)};
}

}  // namespace regrobust
