#include "regrobust/dra_ops.hpp"

#include <algorithm>

#include "regrobust/errors.hpp"
#include "regrobust/order_cells.hpp"

namespace regrobust {

bool guard_satisfiable(const Guard& g, int k) {
  auto atoms = to_order_atoms(g, k);
  return satisfiable(atoms);
}

bool guards_overlap(const Guard& a, const Guard& b, int k) {
  Guard both = a;
  both.insert(both.end(), b.begin(), b.end());
  return guard_satisfiable(both, k);
}

std::vector<DeterminismViolation> check_determinism(const Dra& dra) {
  std::vector<DeterminismViolation> out;
  const int k = dra.num_registers();
  for (int q = 0; q < dra.num_states(); ++q) {
    const auto& outs = dra.outgoing(q);
    for (std::size_t i = 0; i < outs.size(); ++i)
      for (std::size_t j = i + 1; j < outs.size(); ++j) {
        const auto& g1 = dra.transitions()[static_cast<std::size_t>(outs[i])].guard;
        const auto& g2 = dra.transitions()[static_cast<std::size_t>(outs[j])].guard;
        if (!guards_overlap(g1, g2, k)) continue;
        Guard both = g1;
        both.insert(both.end(), g2.begin(), g2.end());
        auto atoms = to_order_atoms(both, k);
        auto model = find_model(atoms, k + 1);
        if (!model) throw Error("closure and cell enumeration disagree on guard overlap");
        DeterminismViolation v;
        v.state = q;
        v.first = outs[i];
        v.second = outs[j];
        v.registers.assign(model->begin(), model->begin() + k);
        v.letter = (*model)[static_cast<std::size_t>(k)];
        out.push_back(std::move(v));
      }
  }
  return out;
}

Dra complete(const Dra& dra) {
  const int k = dra.num_registers();
  const int sink = dra.num_states();
  std::vector<Transition> ts = dra.transitions();
  for (int q = 0; q < dra.num_states(); ++q) {
    const auto& outs = dra.outgoing(q);
    if (outs.empty()) {
      ts.push_back({q, {}, {}, sink});
      continue;
    }
    std::vector<std::vector<OAtom>> guards;
    std::vector<int> vars;
    std::vector<Rational> consts;
    bool has_top = false;
    for (int ti : outs) {
      const auto& g = dra.transitions()[static_cast<std::size_t>(ti)].guard;
      if (g.empty()) has_top = true;
      guards.push_back(to_order_atoms(g, k));
      for (const auto& a : guards.back())
        for (const OTerm* t : {&a.lhs, &a.rhs}) {
          if (t->is_var())
            vars.push_back(t->var);
          else
            consts.push_back(t->value);
        }
    }
    if (has_top) continue;
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::sort(consts.begin(), consts.end());
    consts.erase(std::unique(consts.begin(), consts.end()), consts.end());
    std::vector<Rational> full(static_cast<std::size_t>(k + 1));
    for_each_cell(static_cast<int>(vars.size()), consts, [&](const std::vector<Rational>& vals) {
      for (std::size_t i = 0; i < vars.size(); ++i) full[static_cast<std::size_t>(vars[i])] = vals[i];
      for (const auto& g : guards) {
        bool ok = std::all_of(g.begin(), g.end(), [&](const OAtom& a) { return holds(a, full); });
        if (ok) return true;  // covered
      }
      auto type = cell_type(vars, vals, consts);
      ts.push_back({q, to_guard(type, k), {}, sink});
      return true;
    });
  }
  ts.push_back({sink, {}, {}, sink});
  std::vector<bool> acc = dra.accepting_set();
  acc.push_back(false);
  return Dra(dra.num_states() + 1, k, dra.initial(), std::move(acc), std::move(ts));
}

Dra complement(const Dra& dra) {
  Dra c = complete(dra);
  std::vector<bool> acc = c.accepting_set();
  acc.flip();
  return c.with_accepting(std::move(acc));
}

bool has_disequality(const Guard& g) {
  return std::any_of(g.begin(), g.end(), [](const GuardAtom& a) { return a.op == Cmp::Ne; });
}

std::vector<Guard> split_guard(const Guard& g) {
  std::vector<Guard> out{Guard{}};
  for (const auto& a : g) {
    if (a.op != Cmp::Ne) {
      for (auto& h : out) h.push_back(a);
      continue;
    }
    std::vector<Guard> next;
    next.reserve(out.size() * 2);
    for (const auto& h : out)
      for (Cmp c : {Cmp::Lt, Cmp::Gt}) {
        Guard x = h;
        GuardAtom b = a;
        b.op = c;
        x.push_back(std::move(b));
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  return out;
}

Dra split_disequalities(const Dra& dra) {
  std::vector<Transition> ts;
  bool changed = false;
  for (const auto& t : dra.transitions()) {
    if (!has_disequality(t.guard)) {
      ts.push_back(t);
      continue;
    }
    changed = true;
    for (auto& g : split_guard(t.guard)) {
      if (!guard_satisfiable(g, dra.num_registers())) continue;
      ts.push_back({t.from, std::move(g), t.assign, t.to});
    }
  }
  if (!changed) return dra;
  return Dra(dra.num_states(), dra.num_registers(), dra.initial(), dra.accepting_set(),
             std::move(ts));
}

}  // namespace regrobust
