#include "regrobust/guard_lattice.hpp"

#include "regrobust/errors.hpp"

namespace regrobust {

namespace {

Operand endpoint_operand(const Endpoint& e, const std::vector<Rational>& constants) {
  if (e.kind == EndKind::Reg) return Operand::reg(e.index);
  return Operand::constant(constants.at(static_cast<std::size_t>(e.index)));
}

std::string endpoint_str(const Endpoint& e) {
  switch (e.kind) {
    case EndKind::None: return "_";
    case EndKind::Const: return "c" + std::to_string(e.index);
    case EndKind::Reg: return "r" + std::to_string(e.index);
  }
  return "?";
}

}  // namespace

std::vector<GuardShape> enumerate_shapes(int k, int c) {
  std::vector<Endpoint> ends{{EndKind::None, 0}};
  for (int j = 0; j < c; ++j) ends.push_back({EndKind::Const, j});
  for (int i = 0; i < k; ++i) ends.push_back({EndKind::Reg, i});
  std::vector<GuardShape> out;
  for (const auto& lo : ends)
    for (int ls = 0; ls < (lo.kind == EndKind::None ? 1 : 2); ++ls)
      for (const auto& hi : ends)
        for (int hs = 0; hs < (hi.kind == EndKind::None ? 1 : 2); ++hs) {
          if (lo.kind != EndKind::None && lo == hi && (ls || hs)) continue;
          out.push_back({lo, hi, ls == 1, hs == 1});
        }
  return out;
}

Guard shape_guard(const GuardShape& s, const std::vector<Rational>& constants) {
  const Operand curr = Operand::curr();
  if (s.low.kind != EndKind::None && s.low == s.high)
    return {{curr, Cmp::Eq, endpoint_operand(s.low, constants), {}}};
  Guard g;
  if (s.low.kind != EndKind::None)
    g.push_back({endpoint_operand(s.low, constants), s.low_strict ? Cmp::Lt : Cmp::Le, curr, {}});
  if (s.high.kind != EndKind::None)
    g.push_back({curr, s.high_strict ? Cmp::Lt : Cmp::Le, endpoint_operand(s.high, constants), {}});
  return g;
}

std::string to_string(const GuardShape& s) {
  return std::string(s.low_strict ? "(" : "[") + endpoint_str(s.low) + "," + endpoint_str(s.high) +
         (s.high_strict ? ")" : "]");
}

Operand update_source(int code, int k, const std::vector<Rational>& constants) {
  const int c = static_cast<int>(constants.size());
  if (code < 0 || code > k + c) throw InvalidArgument("update source out of range");
  if (code < k) return Operand::reg(code);
  if (code < k + c) return Operand::constant(constants[static_cast<std::size_t>(code - k)]);
  return Operand::curr();
}

Assignment make_assignment(const std::vector<int>& codes, int k, const std::vector<Rational>& constants) {
  Assignment a;
  for (int i = 0; i < static_cast<int>(codes.size()); ++i) {
    const int code = codes[static_cast<std::size_t>(i)];
    if (code == i) continue;
    a.push_back({i, update_source(code, k, constants)});
  }
  return a;
}

}  // namespace regrobust
