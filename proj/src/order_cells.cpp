#include "regrobust/order_cells.hpp"

#include <algorithm>
#include <map>

#include "regrobust/errors.hpp"

namespace regrobust {

namespace {

// 0 = unrelated, 1 = <=, 2 = <
using Rel = unsigned char;

Rel compose(Rel a, Rel b) { return (a && b) ? std::max(a, b) : Rel{0}; }

void sorted_unique(std::vector<Rational>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

bool satisfiable(std::span<const OAtom> atoms) {
  std::vector<Rational> consts;
  int num_vars = 0;
  for (const auto& a : atoms) {
    for (const OTerm* t : {&a.lhs, &a.rhs}) {
      if (t->is_var())
        num_vars = std::max(num_vars, t->var + 1);
      else
        consts.push_back(t->value);
    }
  }
  sorted_unique(consts);
  const std::size_t n = static_cast<std::size_t>(num_vars) + consts.size();
  auto node = [&](const OTerm& t) -> std::size_t {
    if (t.is_var()) return static_cast<std::size_t>(t.var);
    auto it = std::lower_bound(consts.begin(), consts.end(), t.value);
    return static_cast<std::size_t>(num_vars) + static_cast<std::size_t>(it - consts.begin());
  };
  std::vector<Rel> rel(n * n, 0);
  auto at = [&](std::size_t i, std::size_t j) -> Rel& { return rel[i * n + j]; };
  auto add = [&](std::size_t i, std::size_t j, Rel r) { at(i, j) = std::max(at(i, j), r); };
  for (std::size_t c = 0; c + 1 < consts.size(); ++c)
    add(num_vars + c, num_vars + c + 1, 2);

  std::vector<std::pair<std::size_t, std::size_t>> diseq;
  for (const auto& a : atoms) {
    std::size_t l = node(a.lhs), r = node(a.rhs);
    switch (a.op) {
      case Cmp::Lt: add(l, r, 2); break;
      case Cmp::Le: add(l, r, 1); break;
      case Cmp::Gt: add(r, l, 2); break;
      case Cmp::Ge: add(r, l, 1); break;
      case Cmp::Eq:
        add(l, r, 1);
        add(r, l, 1);
        break;
      case Cmp::Ne: diseq.emplace_back(l, r); break;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!at(i, k)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        Rel c = compose(at(i, k), at(k, j));
        if (c > at(i, j)) at(i, j) = c;
      }
    }
  for (std::size_t i = 0; i < n; ++i)
    if (at(i, i) == 2) return false;
  for (auto [x, y] : diseq) {
    if (x == y) return false;
    if (at(x, y) && at(y, x)) return false;
  }
  return true;
}

namespace {

void place(int i, int num_vars, std::vector<Rational>& values, std::vector<Rational>& points,
           const std::function<bool(const std::vector<Rational>&)>& visit, bool& stop) {
  if (stop) return;
  if (i == num_vars) {
    if (!visit(values)) stop = true;
    return;
  }
  std::vector<Rational> cands;
  if (points.empty()) {
    cands.push_back(Rational(0));
  } else {
    cands.push_back(points.front() - Rational(1));
    for (std::size_t j = 0; j < points.size(); ++j) {
      cands.push_back(points[j]);
      if (j + 1 < points.size()) cands.push_back((points[j] + points[j + 1]) / Rational(2));
    }
    cands.push_back(points.back() + Rational(1));
  }
  for (const auto& c : cands) {
    values[static_cast<std::size_t>(i)] = c;
    auto it = std::lower_bound(points.begin(), points.end(), c);
    bool fresh = it == points.end() || *it != c;
    if (fresh) it = points.insert(it, c);
    place(i + 1, num_vars, values, points, visit, stop);
    if (fresh) points.erase(std::lower_bound(points.begin(), points.end(), c));
    if (stop) return;
  }
}

}  // namespace

void for_each_cell(int num_vars, std::span<const Rational> constants,
                   const std::function<bool(const std::vector<Rational>&)>& visit) {
  std::vector<Rational> points(constants.begin(), constants.end());
  sorted_unique(points);
  std::vector<Rational> values(static_cast<std::size_t>(num_vars));
  bool stop = false;
  place(0, num_vars, values, points, visit, stop);
}

bool holds(const OAtom& a, std::span<const Rational> values) {
  const Rational& l = a.lhs.is_var() ? values[static_cast<std::size_t>(a.lhs.var)] : a.lhs.value;
  const Rational& r = a.rhs.is_var() ? values[static_cast<std::size_t>(a.rhs.var)] : a.rhs.value;
  return compare(l, a.op, r);
}

std::optional<std::vector<Rational>> find_model(std::span<const OAtom> atoms, int num_vars) {
  std::vector<int> used;
  std::vector<Rational> consts;
  for (const auto& a : atoms)
    for (const OTerm* t : {&a.lhs, &a.rhs}) {
      if (t->is_var()) {
        if (t->var >= num_vars) throw InvalidArgument("variable index out of range");
        used.push_back(t->var);
      } else {
        consts.push_back(t->value);
      }
    }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::optional<std::vector<Rational>> found;
  std::vector<Rational> full(static_cast<std::size_t>(num_vars));
  for_each_cell(static_cast<int>(used.size()), consts, [&](const std::vector<Rational>& vals) {
    for (std::size_t i = 0; i < used.size(); ++i) full[static_cast<std::size_t>(used[i])] = vals[i];
    for (const auto& a : atoms)
      if (!holds(a, full)) return true;
    found = full;
    return false;
  });
  return found;
}

std::vector<OAtom> cell_type(std::span<const int> vars, std::span<const Rational> values,
                             std::span<const Rational> constants) {
  // group terms by value
  std::map<Rational, std::vector<OTerm>> groups;
  for (const auto& c : constants) {
    auto& g = groups[c];
    if (g.empty() || g.back().is_var() || g.back().value != c) g.push_back(OTerm::constant(c));
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto& g = groups[values[i]];
    g.push_back(OTerm::variable(vars[i]));
  }
  std::vector<OAtom> out;
  std::vector<OTerm> reps;
  for (auto& [val, terms] : groups) {
    // representative: first variable if any
    auto rep_it = std::find_if(terms.begin(), terms.end(), [](const OTerm& t) { return t.is_var(); });
    OTerm rep = rep_it != terms.end() ? *rep_it : terms.front();
    for (const auto& t : terms) {
      if (t.is_var() && rep.is_var() && t.var == rep.var) continue;
      if (!t.is_var() && !rep.is_var()) continue;
      out.push_back({rep, Cmp::Eq, t});
    }
    reps.push_back(rep);
  }
  for (std::size_t i = 0; i + 1 < reps.size(); ++i) {
    if (!reps[i].is_var() && !reps[i + 1].is_var()) continue;
    out.push_back({reps[i], Cmp::Lt, reps[i + 1]});
  }
  return out;
}

namespace {

OTerm to_term(const Operand& o, int k) {
  switch (o.kind) {
    case OperandKind::Reg: return OTerm::variable(o.index);
    case OperandKind::Curr: return OTerm::variable(k);
    case OperandKind::Curr1: return OTerm::variable(k + 1);
    case OperandKind::Curr2: return OTerm::variable(k + 2);
    case OperandKind::Const: return OTerm::constant(o.value);
  }
  return {};
}

Operand to_operand(const OTerm& t, int k) {
  if (!t.is_var()) return Operand::constant(t.value);
  if (t.var < k) return Operand::reg(t.var);
  if (t.var == k) return Operand::curr();
  if (t.var == k + 1) return Operand::curr1();
  return Operand::curr2();
}

}  // namespace

std::vector<OAtom> to_order_atoms(const Guard& g, int k) {
  std::vector<OAtom> out;
  out.reserve(g.size());
  for (const auto& a : g) {
    OAtom o{to_term(a.lhs, k), a.op, to_term(a.rhs, k)};
    if (a.offset.sign() != 0) {
      if (!o.rhs.is_var())
        o.rhs.value += a.offset;
      else if (!o.lhs.is_var())
        o.lhs.value -= a.offset;
      else
        throw InvalidArgument("offset between two variables is not an order constraint: " +
                              to_string(a));
    }
    out.push_back(std::move(o));
  }
  return out;
}

Guard to_guard(std::span<const OAtom> atoms, int k) {
  Guard g;
  g.reserve(atoms.size());
  for (const auto& a : atoms) g.push_back({to_operand(a.lhs, k), a.op, to_operand(a.rhs, k), {}});
  return g;
}

std::vector<Rational> guard_constants(const Guard& g) {
  std::vector<Rational> out;
  for (const auto& a : g) {
    if (a.lhs.is_const()) out.push_back(a.lhs.value - (a.rhs.is_const() ? Rational(0) : a.offset));
    if (a.rhs.is_const()) out.push_back(a.rhs.value + a.offset);
  }
  sorted_unique(out);
  return out;
}

}  // namespace regrobust
