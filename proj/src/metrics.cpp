#include "regrobust/metrics.hpp"

#include "regrobust/dra_ops.hpp"
#include "regrobust/errors.hpp"

namespace regrobust {

namespace {

GuardAtom atom(Operand l, Cmp op, Operand r, Rational off = 0) {
  return {std::move(l), op, std::move(r), std::move(off)};
}

const Operand c1 = Operand::curr1();
const Operand c2 = Operand::curr2();

// |curr1 - curr2| as two guarded transitions
void add_abs_diff(std::vector<RaaTransition>& ts, int from, int to, Move mov) {
  ts.push_back({from, {atom(c1, Cmp::Le, c2)}, {}, {-1, 1, 0}, mov, to});
  ts.push_back({from, {atom(c1, Cmp::Gt, c2)}, {}, {1, -1, 0}, mov, to});
}

}  // namespace

MetricSpec parse_metric(const std::string& name) {
  auto colon = name.find(':');
  std::string head = name.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : name.substr(colon + 1);
  MetricSpec m;
  if (head == "hamming") {
    m.kind = MetricKind::Hamming;
  } else if (head == "manhattan") {
    m.kind = MetricKind::Manhattan;
  } else if (head == "dtw") {
    m.kind = MetricKind::Dtw;
  } else if (head == "last_letter" || head == "last-letter") {
    m.kind = MetricKind::LastLetter;
  } else if (head == "threshold_hamming" || head == "threshold-hamming") {
    m.kind = MetricKind::ThresholdHamming;
    if (rest.empty()) throw InvalidArgument("threshold_hamming needs a threshold, e.g. threshold_hamming:1");
    m.threshold = Rational::parse(rest);
    if (m.threshold.sign() < 0) throw InvalidArgument("threshold must be >= 0");
    return m;
  } else if (head == "edit") {
    m.kind = MetricKind::Edit;
    if (!rest.empty()) {
      auto c = rest.find(':');
      if (c == std::string::npos) throw InvalidArgument("edit costs are given as edit:SUBST:INSDEL");
      m.subst_cost = Rational::parse(rest.substr(0, c));
      m.insdel_cost = Rational::parse(rest.substr(c + 1));
    }
    return m;
  } else {
    throw InvalidArgument("unknown metric '" + name + "'");
  }
  if (!rest.empty()) throw InvalidArgument("metric '" + head + "' takes no parameters");
  return m;
}

std::string metric_name(const MetricSpec& m) {
  switch (m.kind) {
    case MetricKind::LastLetter: return "last_letter";
    case MetricKind::Hamming: return "hamming";
    case MetricKind::ThresholdHamming: return "threshold_hamming:" + m.threshold.pretty();
    case MetricKind::Manhattan: return "manhattan";
    case MetricKind::Edit:
      if (m.subst_cost == Rational(1) && m.insdel_cost == Rational(1)) return "edit";
      return "edit:" + m.subst_cost.pretty() + ":" + m.insdel_cost.pretty();
    case MetricKind::Dtw: return "dtw";
  }
  return "?";
}

Raa build_metric(const MetricSpec& m) {
  std::vector<RaaTransition> ts;
  switch (m.kind) {
    case MetricKind::Hamming:
      ts.push_back({0, {atom(c1, Cmp::Lt, c2)}, {}, {0, 0, 1}, Move::Both, 0});
      ts.push_back({0, {atom(c1, Cmp::Gt, c2)}, {}, {0, 0, 1}, Move::Both, 0});
      ts.push_back({0, {atom(c1, Cmp::Eq, c2)}, {}, {0, 0, 0}, Move::Both, 0});
      return Raa(1, 0, 0, {true}, std::move(ts));
    case MetricKind::ThresholdHamming: {
      const Rational& c = m.threshold;
      ts.push_back({0, {atom(c1, Cmp::Gt, c2, c)}, {}, {0, 0, 1}, Move::Both, 0});
      ts.push_back({0, {atom(c1, Cmp::Lt, c2, -c)}, {}, {0, 0, 1}, Move::Both, 0});
      ts.push_back({0, {atom(c1, Cmp::Le, c2, c), atom(c1, Cmp::Ge, c2, -c)}, {}, {0, 0, 0},
                    Move::Both, 0});
      return Raa(1, 0, 0, {true}, std::move(ts));
    }
    case MetricKind::Manhattan:
      add_abs_diff(ts, 0, 0, Move::Both);
      return Raa(1, 0, 0, {true}, std::move(ts));
    case MetricKind::Edit: {
      const Rational& s = m.subst_cost;
      const Rational& d = m.insdel_cost;
      ts.push_back({0, {atom(c1, Cmp::Ne, c2)}, {}, {0, 0, s}, Move::Both, 0});   // t1
      ts.push_back({0, {atom(c1, Cmp::Eq, c2)}, {}, {0, 0, 0}, Move::Both, 0});   // t2
      ts.push_back({0, {}, {}, {0, 0, d + d}, Move::Both, 0});                    // t3
      ts.push_back({0, {}, {}, {0, 0, d}, Move::Head1, 0});                       // t4
      ts.push_back({0, {}, {}, {0, 0, d}, Move::Head2, 0});                       // t5
      return Raa(1, 0, 0, {true}, std::move(ts));
    }
    case MetricKind::Dtw:
      // Heads point at the current matched pair, whose cost is paid when
      // leaving it; acceptance needs both heads exhausted, which forces the
      // last pair to be (m, n) and left by a joint move.
      add_abs_diff(ts, 0, 0, Move::Both);
      add_abs_diff(ts, 0, 0, Move::Head1);
      add_abs_diff(ts, 0, 0, Move::Head2);
      return Raa(1, 0, 0, {true}, std::move(ts));
    case MetricKind::LastLetter:
      ts.push_back({0, {atom(c1, Cmp::Eq, c2)}, {}, {0, 0, 0}, Move::Both, 0});
      ts.push_back({0, {atom(c1, Cmp::Ge, c2)}, {}, {1, -1, 0}, Move::Both, 1});   // t
      ts.push_back({0, {atom(c1, Cmp::Lt, c2)}, {}, {-1, 1, 0}, Move::Both, 1});   // t'
      return Raa(2, 0, 0, {false, true}, std::move(ts));
  }
  throw InvalidArgument("unknown metric kind");
}

namespace {

Operand shift_dra_operand(const Operand& o, int reg_shift, Operand curr_as) {
  if (o.kind == OperandKind::Reg) return Operand::reg(o.index + reg_shift);
  if (o.kind == OperandKind::Curr) return curr_as;
  return o;
}

void append_dra_part(RaaTransition& out, const Transition& t, int reg_shift, const Operand& curr_as) {
  for (const auto& a : t.guard)
    out.guard.push_back({shift_dra_operand(a.lhs, reg_shift, curr_as), a.op,
                         shift_dra_operand(a.rhs, reg_shift, curr_as), a.offset});
  for (const auto& u : t.assign)
    out.assign.push_back({u.target + reg_shift, shift_dra_operand(u.src, reg_shift, curr_as)});
}

}  // namespace

Raa restrict_metric(const Raa& raa, const Dra& l1_in, const Dra& l2_in) {
  const Dra l1 = complete(split_disequalities(l1_in));
  const Dra l2 = complete(split_disequalities(l2_in));
  const int QM = raa.num_states(), Q1 = l1.num_states(), Q2 = l2.num_states();
  const int s1 = raa.num_registers(), s2 = s1 + l1.num_registers();
  const int k = s2 + l2.num_registers();
  auto id = [&](int qm, int p1, int p2) { return (qm * Q1 + p1) * Q2 + p2; };
  std::vector<RaaTransition> ts;
  for (const auto& t : raa.transitions())
    for (int p1 = 0; p1 < Q1; ++p1)
      for (int p2 = 0; p2 < Q2; ++p2) {
        std::vector<const Transition*> a1{nullptr}, a2{nullptr};
        if (moves_head1(t.mov)) {
          a1.clear();
          for (int ti : l1.outgoing(p1)) a1.push_back(&l1.transitions()[static_cast<std::size_t>(ti)]);
        }
        if (moves_head2(t.mov)) {
          a2.clear();
          for (int ti : l2.outgoing(p2)) a2.push_back(&l2.transitions()[static_cast<std::size_t>(ti)]);
        }
        for (const Transition* x : a1)
          for (const Transition* y : a2) {
            RaaTransition u = t;
            u.from = id(t.from, p1, p2);
            u.to = id(t.to, x ? x->to : p1, y ? y->to : p2);
            if (x) append_dra_part(u, *x, s1, Operand::curr1());
            if (y) append_dra_part(u, *y, s2, Operand::curr2());
            ts.push_back(std::move(u));
          }
      }
  std::vector<bool> acc(static_cast<std::size_t>(QM * Q1 * Q2), false);
  for (int qm = 0; qm < QM; ++qm)
    for (int p1 = 0; p1 < Q1; ++p1)
      for (int p2 = 0; p2 < Q2; ++p2)
        acc[static_cast<std::size_t>(id(qm, p1, p2))] =
            raa.accepting(qm) && l1.accepting(p1) && l2.accepting(p2);
  return Raa(QM * Q1 * Q2, k, id(raa.initial(), l1.initial(), l2.initial()), std::move(acc),
             std::move(ts));
}

}  // namespace regrobust
