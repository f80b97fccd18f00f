#include "regrobust/robustness.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

#include "regrobust/dra_ops.hpp"
#include "regrobust/errors.hpp"
#include "regrobust/serialize.hpp"

namespace regrobust {

const char* side_str(Side s) {
  switch (s) {
    case Side::FlipToReject: return "flip-to-reject";
    case Side::FlipToAccept: return "flip-to-accept";
    case Side::Auto: return "auto";
  }
  return "?";
}

Side parse_side(const std::string& s) {
  if (s == "flip-to-reject" || s == "reject") return Side::FlipToReject;
  if (s == "flip-to-accept" || s == "accept") return Side::FlipToAccept;
  if (s == "auto") return Side::Auto;
  throw InvalidArgument("unknown side '" + s + "' (flip-to-reject, flip-to-accept, auto)");
}

std::strong_ordering operator<=>(const GraphVertex& a, const GraphVertex& b) {
  if (auto c = a.state <=> b.state; c != 0) return c;
  if (auto c = a.consumed <=> b.consumed; c != 0) return c;
  if (auto c = a.pending.has_value() <=> b.pending.has_value(); c != 0) return c;
  if (a.pending)
    if (auto c = *a.pending <=> *b.pending; c != 0) return c;
  return std::lexicographical_compare_three_way(a.regs.begin(), a.regs.end(), b.regs.begin(),
                                                b.regs.end());
}

namespace {

Rational absr(const Rational& x) { return x.sign() < 0 ? -x : x; }

void add_constants(const Guard& g, std::vector<Rational>& out) {
  for (const auto& a : g) {
    if (a.lhs.is_const()) out.push_back(a.lhs.value - a.offset);
    if (a.rhs.is_const()) out.push_back(a.rhs.value + a.offset);
  }
}

void add_constants(const Assignment& as, std::vector<Rational>& out) {
  for (const auto& u : as)
    if (u.src.is_const()) out.push_back(u.src.value);
}

void sort_unique(std::vector<Rational>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

// curr1 := value, with offsets folded into any constant side; atoms that
// become constant-constant are decided here (nullopt = false).
std::optional<Guard> pin_head1(const Guard& g, const Rational* value) {
  Guard out;
  for (GuardAtom a : g) {
    if (value) {
      if (a.lhs.kind == OperandKind::Curr1) a.lhs = Operand::constant(*value);
      if (a.rhs.kind == OperandKind::Curr1) a.rhs = Operand::constant(*value);
    }
    if (a.offset.sign() != 0) {
      if (a.rhs.is_const()) {
        a.rhs.value += a.offset;
        a.offset = Rational(0);
      } else if (a.lhs.is_const()) {
        a.lhs.value -= a.offset;
        a.offset = Rational(0);
      }
    }
    if (a.lhs.is_const() && a.rhs.is_const()) {
      if (!compare(a.lhs.value, a.op, a.rhs.value + a.offset)) return std::nullopt;
      continue;
    }
    if (a.offset.sign() != 0)
      throw InvalidArgument("offset atoms are only supported against head-1 letters or constants");
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

BoundedProjectedRaa project_and_bound(const Raa& metric, const Sequence& v,
                                      const std::optional<Rational>& delta,
                                      const std::vector<Rational>& extra_constants) {
  if (delta && delta->sign() <= 0) throw InvalidArgument("delta must be positive");
  const int m = static_cast<int>(v.size());
  const int W = m + 1;
  std::vector<RaaTransition> ts;
  for (const auto& t : metric.transitions()) {
    const bool need1 = needs_head1(t);
    const int d1 = moves_head1(t.mov) ? 1 : 0;
    for (int i = 0; i <= m; ++i) {
      if (need1 && i == m) continue;
      const Rational* vi = need1 ? &v[static_cast<std::size_t>(i)] : nullptr;
      auto g = pin_head1(t.guard, vi);
      if (!g) continue;
      RaaTransition u;
      u.from = t.from * W + i;
      u.to = t.to * W + i + d1;
      u.mov = t.mov;
      u.guard = std::move(*g);
      if (vi) u.guard.insert(u.guard.begin(), {Operand::curr1(), Cmp::Eq, Operand::constant(*vi), Rational(0)});
      for (const auto& up : t.assign)
        u.assign.push_back({up.target, up.src.kind == OperandKind::Curr1 ? Operand::constant(*vi) : up.src});
      u.acc = {Rational(0), t.acc.a2, t.acc.b + (vi ? t.acc.a1 * *vi : Rational(0))};
      ts.push_back(std::move(u));
    }
  }
  // Bound: beyond every constant the instance compares against, a head-2
  // letter can be pulled towards the constants without changing any guard
  // outcome or increasing any increment, so 1 + max|constant| suffices. The
  // cost-derived term max |(delta - b)/a| is kept on top.
  Rational bound(0);
  auto widen = [&](const Rational& x) {
    if (absr(x) > bound) bound = absr(x);
  };
  for (const auto& x : v) widen(x);
  for (const auto& x : extra_constants) widen(x);
  std::vector<Rational> cs;
  for (const auto& t : ts) {
    add_constants(t.guard, cs);
    add_constants(t.assign, cs);
    if (t.acc.a2.sign() != 0) widen(t.acc.b / t.acc.a2);
  }
  for (const auto& c : cs) widen(c);
  Rational alpha = bound + Rational(1);
  if (delta)
    for (const auto& t : ts)
      if (t.acc.a2.sign() != 0) {
        Rational f = absr((*delta - t.acc.b) / t.acc.a2);
        if (f > alpha) alpha = f;
      }
  for (auto& t : ts)
    if (moves_head2(t.mov)) {
      t.guard.push_back({Operand::curr2(), Cmp::Ge, Operand::constant(-alpha), Rational(0)});
      t.guard.push_back({Operand::curr2(), Cmp::Le, Operand::constant(alpha), Rational(0)});
    }
  std::vector<bool> acc(static_cast<std::size_t>(metric.num_states() * W), false);
  std::vector<int> head1(static_cast<std::size_t>(metric.num_states() * W));
  for (int q = 0; q < metric.num_states(); ++q)
    for (int i = 0; i <= m; ++i) {
      acc[static_cast<std::size_t>(q * W + i)] = metric.accepting(q) && i == m;
      head1[static_cast<std::size_t>(q * W + i)] = i;
    }
  BoundedProjectedRaa out;
  out.raa = Raa(metric.num_states() * W, metric.num_registers(), metric.initial() * W, std::move(acc),
                std::move(ts));
  out.alpha = alpha;
  out.head1_of_state = std::move(head1);
  out.m = m;
  out.v = v;
  return out;
}

BoundedProjectedRaa product(const BoundedProjectedRaa& bp, const Dra& a) {
  for (const auto& t : a.transitions()) {
    if (references(t.guard, OperandKind::Curr1) || references(t.guard, OperandKind::Curr2))
      throw IncompatibleGuards("the flip target may only read its own letter");
    if (has_disequality(t.guard)) throw DisequalityPresent("flip target still has disequalities");
  }
  const Raa& r = bp.raa;
  const int P = a.num_states();
  const int s = r.num_registers();
  auto id = [&](int q, int p) { return q * P + p; };
  auto shift = [&](const Operand& o) {
    if (o.kind == OperandKind::Reg) return Operand::reg(o.index + s);
    if (o.kind == OperandKind::Curr) return Operand::curr2();
    return o;
  };
  std::vector<RaaTransition> ts;
  for (const auto& t : r.transitions())
    for (int p = 0; p < P; ++p) {
      if (!moves_head2(t.mov)) {
        RaaTransition u = t;
        u.from = id(t.from, p);
        u.to = id(t.to, p);
        ts.push_back(std::move(u));
        continue;
      }
      for (int ti : a.outgoing(p)) {
        const auto& d = a.transitions()[static_cast<std::size_t>(ti)];
        RaaTransition u = t;
        u.from = id(t.from, p);
        u.to = id(t.to, d.to);
        for (const auto& at : d.guard) u.guard.push_back({shift(at.lhs), at.op, shift(at.rhs), at.offset});
        for (const auto& up : d.assign) u.assign.push_back({up.target + s, shift(up.src)});
        ts.push_back(std::move(u));
      }
    }
  std::vector<bool> acc(static_cast<std::size_t>(r.num_states() * P), false);
  std::vector<int> head1(static_cast<std::size_t>(r.num_states() * P));
  for (int q = 0; q < r.num_states(); ++q)
    for (int p = 0; p < P; ++p) {
      acc[static_cast<std::size_t>(id(q, p))] = r.accepting(q) && a.accepting(p);
      head1[static_cast<std::size_t>(id(q, p))] = bp.head1_of_state[static_cast<std::size_t>(q)];
    }
  BoundedProjectedRaa out;
  out.raa = Raa(r.num_states() * P, s + a.num_registers(), id(r.initial(), a.initial()), std::move(acc),
                std::move(ts));
  out.alpha = bp.alpha;
  out.head1_of_state = std::move(head1);
  out.m = bp.m;
  out.v = bp.v;
  return out;
}

Raa closure(const Raa& raa) {
  std::vector<RaaTransition> ts = raa.transitions();
  for (auto& t : ts)
    for (auto& a : t.guard) {
      if (a.op == Cmp::Ne) throw DisequalityPresent("closure needs disequality-free guards");
      a.op = relax(a.op);
    }
  return Raa(raa.num_states(), raa.num_registers(), raa.initial(), raa.accepting_set(), std::move(ts));
}

namespace {

struct HEnv {
  const HValue* regs = nullptr;
  const HValue* curr1 = nullptr;
  const HValue* curr2 = nullptr;
};

const HValue& hresolve(const Operand& o, const HEnv& e, HValue& tmp) {
  switch (o.kind) {
    case OperandKind::Reg: return e.regs[o.index];
    case OperandKind::Curr1:
      if (!e.curr1) throw Error("head-1 letter read past the end");
      return *e.curr1;
    case OperandKind::Curr2:
      if (!e.curr2) throw Error("head-2 letter read without a letter");
      return *e.curr2;
    case OperandKind::Const:
      tmp = {o.value, 0};
      return tmp;
    case OperandKind::Curr: break;
  }
  throw Error("unexpected operand in a product guard");
}

bool hholds(const Guard& g, const HEnv& e) {
  HValue t1, t2;
  for (const auto& a : g) {
    const HValue& l = hresolve(a.lhs, e, t1);
    const HValue& r = hresolve(a.rhs, e, t2);
    auto c = l <=> r;
    bool ok = false;
    switch (a.op) {
      case Cmp::Lt: ok = c < 0; break;
      case Cmp::Le: ok = c <= 0; break;
      case Cmp::Eq: ok = c == 0; break;
      case Cmp::Ne: ok = c != 0; break;
      case Cmp::Gt: ok = c > 0; break;
      case Cmp::Ge: ok = c >= 0; break;
    }
    if (!ok) return false;
  }
  return true;
}

// Canonical offsets: per standard part, offsets above 0 become 2, 4, ...
// and those below become -2, -4, ... in order; 0 is kept. Only the order of
// values sharing a standard part is observable, so this is lossless.
void renormalize(std::vector<HValue>& regs, std::optional<HValue>& pending) {
  std::vector<HValue*> vals;
  for (auto& r : regs)
    if (r.k != 0) vals.push_back(&r);
  if (pending && pending->k != 0) vals.push_back(&*pending);
  if (vals.empty()) return;
  std::sort(vals.begin(), vals.end(), [](const HValue* a, const HValue* b) { return *a < *b; });
  std::size_t i = 0;
  while (i < vals.size()) {
    std::size_t j = i;
    while (j < vals.size() && vals[j]->std == vals[i]->std) ++j;
    // negatives: walk from closest to zero downwards
    std::vector<std::pair<std::int64_t, std::int64_t>> remap;
    std::int64_t next = -2;
    for (std::size_t x = j; x-- > i;) {
      std::int64_t k = vals[x]->k;
      if (k > 0) continue;
      if (remap.empty() || remap.back().first != k) remap.push_back({k, next}), next -= 2;
    }
    next = 2;
    for (std::size_t x = i; x < j; ++x) {
      std::int64_t k = vals[x]->k;
      if (k < 0) continue;
      if (remap.empty() || remap.back().first != k) remap.push_back({k, next}), next += 2;
    }
    for (std::size_t x = i; x < j; ++x)
      for (const auto& [from, to] : remap)
        if (vals[x]->k == from) {
          vals[x]->k = to;
          break;
        }
    i = j;
  }
}

// Candidate letters for a fresh head-2 read from vertex u.
std::vector<HValue> candidates(const GraphVertex& u, const std::vector<Rational>& constants, GraphMode mode) {
  std::vector<HValue> out;
  for (const auto& c : constants) {
    out.push_back({c, 0});
    if (mode == GraphMode::Closed) continue;
    std::vector<std::int64_t> ks{0};
    for (const auto& r : u.regs)
      if (r.std == c) ks.push_back(r.k);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    out.push_back({c, ks.front() - 1});
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (ks[i] != 0) out.push_back({c, ks[i]});
      if (i + 1 < ks.size()) out.push_back({c, (ks[i] + ks[i + 1]) / 2});
    }
    out.push_back({c, ks.back() + 1});
  }
  return out;
}

}  // namespace

namespace {

struct VertexHash {
  std::size_t operator()(const GraphVertex& v) const noexcept {
    std::size_t h = std::hash<int>()(v.state) * 31 + v.consumed;
    auto mix = [&](const HValue& x) { h = h * 1000003u ^ (x.std.hash() + static_cast<std::size_t>(x.k) * 7919u); };
    for (const auto& r : v.regs) mix(r);
    if (v.pending) mix(*v.pending);
    return h;
  }
};

// Expands vertices of the coverability graph on demand.
class Explorer {
 public:
  Explorer(const BoundedProjectedRaa& p, GraphMode mode, std::size_t max_vertices)
      : p_(p), raa_(mode == GraphMode::Closed ? closure(p.raa) : p.raa), mode_(mode), max_(max_vertices) {
    g.mode = mode;
    std::vector<Rational> cs{Rational(0)};
    for (const auto& x : p.v) cs.push_back(x);
    for (const auto& t : raa_.transitions()) {
      add_constants(t.guard, cs);
      add_constants(t.assign, cs);
      if (t.acc.a2.sign() != 0) cs.push_back(-t.acc.b / t.acc.a2);
      need2_.push_back(needs_head2(t));
      consume_.push_back(moves_head2(t.mov));
    }
    sort_unique(cs);
    g.constants = std::move(cs);
    for (const auto& x : p.v) pinned_.push_back({x, 0});
    GraphVertex s;
    s.state = raa_.initial();
    s.regs.assign(static_cast<std::size_t>(raa_.num_registers()), HValue{Rational(0), 0});
    g.source = intern(std::move(s));
  }

  bool is_target(int vi) const {
    const auto& u = g.vertices[static_cast<std::size_t>(vi)];
    return raa_.accepting(u.state) && !u.pending && u.consumed;
  }

  void expand(int vi_int) {
    const auto vi = static_cast<std::size_t>(vi_int);
    const GraphVertex u = g.vertices[vi];
    const std::size_t k = static_cast<std::size_t>(raa_.num_registers());
    const int h1 = p_.head1_of_state[static_cast<std::size_t>(u.state)];
    const HValue* c1 = h1 < p_.m ? &pinned_[static_cast<std::size_t>(h1)] : nullptr;
    std::vector<HValue> fresh_letters;
    bool have_fresh = false;
    for (int ti : raa_.outgoing(u.state)) {
      const auto tix = static_cast<std::size_t>(ti);
      const auto& t = raa_.transitions()[tix];
      std::vector<std::optional<HValue>> letters;
      bool fresh = false;
      if (!need2_[tix]) {
        letters.push_back(std::nullopt);
      } else if (u.pending) {
        letters.push_back(u.pending);
      } else {
        if (!have_fresh) fresh_letters = candidates(u, g.constants, mode_), have_fresh = true;
        letters.assign(fresh_letters.begin(), fresh_letters.end());
        fresh = true;
      }
      for (const auto& d : letters) {
        HEnv env{u.regs.data(), c1, d ? &*d : nullptr};
        if (!hholds(t.guard, env)) continue;
        Rational w = t.acc.b;
        int inf_sign = 0;
        if (t.acc.a2.sign() != 0) {
          w += t.acc.a2 * d->std;
          inf_sign = t.acc.a2.sign() * (d->k > 0 ? 1 : d->k < 0 ? -1 : 0);
        }
        if (w.sign() < 0 || (w.sign() == 0 && inf_sign < 0)) continue;
        GraphVertex nv;
        nv.state = t.to;
        nv.regs.assign(u.regs.begin(), u.regs.end());
        HValue tmp;
        for (const auto& up : t.assign) nv.regs[static_cast<std::size_t>(up.target)] = hresolve(up.src, env, tmp);
        nv.consumed = u.consumed || consume_[tix];
        if (d && !consume_[tix]) nv.pending = d;
        if (mode_ == GraphMode::Exact) renormalize(nv.regs, nv.pending);
        (void)k;
        int to = intern(std::move(nv));
        g.out[vi].push_back(static_cast<int>(g.edges.size()));
        g.edges.push_back({vi_int, to, std::move(w), ti, d, fresh && d.has_value(), consume_[tix]});
      }
    }
  }

  CoverabilityGraph g;

 private:
  int intern(GraphVertex v) {
    auto it = index_.find(v);
    if (it != index_.end()) return it->second;
    if (g.vertices.size() >= max_)
      throw GraphLimitExceeded("coverability graph exceeds " + std::to_string(max_) + " vertices");
    int id = static_cast<int>(g.vertices.size());
    index_.emplace(v, id);
    g.vertices.push_back(std::move(v));
    g.out.emplace_back();
    return id;
  }

  const BoundedProjectedRaa& p_;
  Raa raa_;
  GraphMode mode_;
  std::size_t max_;
  std::vector<HValue> pinned_;
  std::vector<bool> need2_, consume_;
  std::unordered_map<GraphVertex, int, VertexHash> index_;
};

// Dijkstra over g, calling expand(u) before u's edges are read. Stops at the
// first target, or before settling a vertex whose distance reaches cutoff.
template <class Expand, class IsTarget>
std::optional<GraphPath> dijkstra(const CoverabilityGraph& g, Expand&& expand, IsTarget&& is_target,
                                  const std::optional<Rational>& cutoff) {
  std::vector<std::optional<Rational>> dist;
  std::vector<int> pred;
  std::vector<char> done;
  auto grow = [&] {
    dist.resize(g.vertices.size());
    pred.resize(g.vertices.size(), -1);
    done.resize(g.vertices.size(), 0);
  };
  grow();
  using Item = std::pair<Rational, int>;
  auto later = [&](const Item& a, const Item& b) {
    if (a.first != b.first) return a.first > b.first;
    return g.vertices[static_cast<std::size_t>(a.second)] > g.vertices[static_cast<std::size_t>(b.second)];
  };
  std::priority_queue<Item, std::vector<Item>, decltype(later)> pq(later);
  dist[static_cast<std::size_t>(g.source)] = Rational(0);
  pq.push({Rational(0), g.source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    auto ui = static_cast<std::size_t>(u);
    if (done[ui]) continue;
    if (cutoff && !(d < *cutoff) && !is_target(u)) return std::nullopt;
    done[ui] = 1;
    if (is_target(u)) {
      GraphPath path;
      path.weight = d;
      path.target = u;
      for (int x = u; pred[static_cast<std::size_t>(x)] >= 0;) {
        int e = pred[static_cast<std::size_t>(x)];
        path.edges.push_back(e);
        x = g.edges[static_cast<std::size_t>(e)].from;
      }
      std::reverse(path.edges.begin(), path.edges.end());
      return path;
    }
    expand(u);
    grow();
    for (int ei : g.out[ui]) {
      const auto& e = g.edges[static_cast<std::size_t>(ei)];
      if (e.weight.sign() < 0) throw Error("negative edge weight in coverability graph");
      auto vi = static_cast<std::size_t>(e.to);
      if (done[vi]) continue;
      Rational nd = d + e.weight;
      if (!dist[vi] || nd < *dist[vi]) {
        dist[vi] = nd;
        pred[vi] = ei;
        pq.push({std::move(nd), e.to});
      }
    }
  }
  return std::nullopt;
}

}  // namespace

CoverabilityGraph build_graph(const BoundedProjectedRaa& p, GraphMode mode, std::size_t max_vertices) {
  Explorer ex(p, mode, max_vertices);
  for (std::size_t vi = 0; vi < ex.g.vertices.size(); ++vi) {
    if (ex.is_target(static_cast<int>(vi))) ex.g.targets.push_back(static_cast<int>(vi));
    ex.expand(static_cast<int>(vi));
  }
  return std::move(ex.g);
}

std::optional<GraphPath> shortest_path(const CoverabilityGraph& g) {
  std::vector<char> target(g.vertices.size(), 0);
  for (int t : g.targets) target[static_cast<std::size_t>(t)] = 1;
  return dijkstra(
      g, [](int) {}, [&](int v) { return target[static_cast<std::size_t>(v)] != 0; }, std::nullopt);
}

SearchResult search(const BoundedProjectedRaa& p, GraphMode mode, const std::optional<Rational>& cutoff,
                    std::size_t max_vertices) {
  Explorer ex(p, mode, max_vertices);
  SearchResult r;
  r.path = dijkstra(
      ex.g, [&](int v) { ex.expand(v); }, [&](int v) { return ex.is_target(v); }, cutoff);
  r.graph = std::move(ex.g);
  return r;
}

namespace {

// Concrete value for hyperreal letter h given the live (hyperreal, real)
// pairs sharing its standard part.
Rational place(const HValue& h, const std::vector<HValue>& live_h, const std::vector<Rational>& live_r,
               const Rational& eps) {
  const HValue* lo = nullptr;
  const HValue* hi = nullptr;
  Rational lo_r, hi_r;
  auto consider = [&](const HValue& x, const Rational& r) {
    if (x.std != h.std) return;
    if (x.k <= h.k && (!lo || x.k > lo->k)) lo = &x, lo_r = r;
    if (x.k >= h.k && (!hi || x.k < hi->k)) hi = &x, hi_r = r;
  };
  HValue anchor{h.std, 0};
  consider(anchor, h.std);
  for (std::size_t i = 0; i < live_h.size(); ++i) consider(live_h[i], live_r[i]);
  if (lo && lo->k == h.k) return lo_r;
  if (hi && hi->k == h.k) return hi_r;
  if (lo && hi) return (lo_r + hi_r) / Rational(2);
  if (lo) return lo_r + eps;
  return hi_r - eps;
}

Sequence realize(const CoverabilityGraph& g, const BoundedProjectedRaa& p, const GraphPath& path,
                 const Rational& eps) {
  const auto& ts = p.raa.transitions();
  std::vector<Rational> regs(static_cast<std::size_t>(p.raa.num_registers()));
  std::optional<Rational> pending;
  Sequence w;
  std::vector<Rational> next;
  for (int ei : path.edges) {
    const auto& e = g.edges[static_cast<std::size_t>(ei)];
    const auto& u = g.vertices[static_cast<std::size_t>(e.from)];
    const auto& t = ts[static_cast<std::size_t>(e.transition)];
    std::optional<Rational> letter;
    if (e.letter) letter = e.fresh ? place(*e.letter, u.regs, regs, eps) : *pending;
    int h1 = p.head1_of_state[static_cast<std::size_t>(u.state)];
    const Rational* c1 = h1 < p.m ? &p.v[static_cast<std::size_t>(h1)] : nullptr;
    Env env{regs.data(), nullptr, c1, letter ? &*letter : nullptr};
    next = regs;
    apply(t.assign, env, regs, next);
    regs.swap(next);
    if (e.consumes) {
      w.push_back(*letter);
      pending.reset();
    } else if (e.fresh) {
      pending = letter;
    }
  }
  return w;
}

}  // namespace

Sequence refine_witness(const CoverabilityGraph& g, const BoundedProjectedRaa& p, const GraphPath& path,
                        const Rational& delta, const std::function<bool(const Sequence&)>& check) {
  if (!(path.weight < delta)) throw InvalidArgument("refinement needs a path cheaper than delta");
  Rational sum_a(1);
  std::int64_t n = 1;
  for (int ei : path.edges) {
    const auto& e = g.edges[static_cast<std::size_t>(ei)];
    sum_a += absr(p.raa.transitions()[static_cast<std::size_t>(e.transition)].acc.a2);
    if (e.fresh) ++n;
  }
  Rational eps = (delta - path.weight) / (Rational(2) * sum_a * Rational(n));
  for (std::size_t i = 0; i + 1 < g.constants.size(); ++i) {
    Rational gap = (g.constants[i + 1] - g.constants[i]) / Rational(4 * n);
    if (gap < eps) eps = gap;
  }
  for (int attempt = 0; attempt <= 40; ++attempt) {
    Sequence w = realize(g, p, path, eps);
    if (check(w)) return w;
    eps = eps / Rational(2);
  }
  throw RefinementFailed("could not instantiate the infinitesimal offsets of the optimal path");
}

namespace {

struct Prepared {
  Dra split;
  bool v_accepted = false;
  Side side = Side::Auto;
  Dra target;
};

Prepared prepare(const Dra& dra, const Sequence& v, Side side) {
  if (v.empty()) throw InvalidArgument("robustness is checked at a non-empty sequence");
  Prepared pr;
  pr.split = split_disequalities(dra);
  pr.v_accepted = accepts(dra, v);
  pr.side = side == Side::Auto ? (pr.v_accepted ? Side::FlipToReject : Side::FlipToAccept) : side;
  pr.target = pr.side == Side::FlipToReject ? complement(pr.split) : complete(pr.split);
  return pr;
}

std::vector<Rational> dra_constants(const Dra& d) {
  std::vector<Rational> cs;
  for (const auto& t : d.transitions()) {
    add_constants(t.guard, cs);
    add_constants(t.assign, cs);
  }
  return cs;
}

BoundedProjectedRaa build_product(const Prepared& pr, const Raa& metric, const Sequence& v,
                                  const std::optional<Rational>& delta) {
  auto bp = project_and_bound(split_disequalities(metric), v, delta, dra_constants(pr.target));
  return product(bp, pr.target);
}

}  // namespace

RobustnessVerdict check_robustness(const RobustnessQuery& q) {
  if (q.delta.sign() <= 0) throw InvalidArgument("delta must be positive");
  Prepared pr = prepare(q.dra, q.v, q.side);
  auto prod = build_product(pr, q.metric, q.v, q.delta);
  auto res = search(prod, GraphMode::Exact, q.delta, q.max_vertices);
  RobustnessVerdict out;
  out.side = pr.side;
  out.v_accepted = pr.v_accepted;
  out.alpha = prod.alpha;
  out.graph_vertices = res.graph.vertices.size();
  out.graph_edges = res.graph.edges.size();
  if (res.path) out.min_flip_cost = ExtendedCost(res.path->weight);
  if (!res.path || !(res.path->weight < q.delta)) return out;
  out.robust = false;
  const bool want = pr.side == Side::FlipToAccept;
  Rational cost;
  auto check = [&](const Sequence& w) {
    if (accepts(q.dra, w) != want) return false;
    ExtendedCost c = evaluate(q.metric, q.v, w);
    if (!c.finite() || !(c.value() < q.delta)) return false;
    cost = c.value();
    return true;
  };
  Sequence w = refine_witness(res.graph, prod, *res.path, q.delta, check);
  out.witness = Witness{std::move(w), cost, res.path->weight};
  return out;
}

ExtendedCost min_flip_cost(const Dra& dra, const Sequence& v, const Raa& metric, Side side,
                           std::size_t max_vertices) {
  Prepared pr = prepare(dra, v, side);
  auto prod = build_product(pr, metric, v, std::nullopt);
  auto res = search(prod, GraphMode::Exact, std::nullopt, max_vertices);
  return res.path ? ExtendedCost(res.path->weight) : ExtendedCost::infinity();
}

nlohmann::json verdict_json(const RobustnessVerdict& v) {
  nlohmann::json j;
  j["robust"] = v.robust;
  j["side"] = side_str(v.side);
  j["v_accepted"] = v.v_accepted;
  j["min_flip_cost"] = v.min_flip_cost.finite() ? nlohmann::json(v.min_flip_cost.value().str()) : nlohmann::json();
  if (v.witness) {
    j["witness"] = sequence_to_json(v.witness->w);
    j["witness_cost"] = v.witness->cost.str();
  } else {
    j["witness"] = nullptr;
  }
  j["alpha"] = v.alpha.str();
  j["graph_vertices"] = v.graph_vertices;
  j["graph_edges"] = v.graph_edges;
  return j;
}

}  // namespace regrobust
