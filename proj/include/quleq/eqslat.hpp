#ifndef QULEQ_EQSLAT_HPP
#define QULEQ_EQSLAT_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "quleq/latterm.hpp"
#include "quleq/poset.hpp"
#include "quleq/quolattice.hpp"

namespace quleq {

// A finite lattice given by explicit operation tables; values are indices
// into labels.
struct SmallLattice {
  std::string name;
  int size = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> meet_table, join_table;

  int meet(int a, int b) const { return meet_table[a][b]; }
  int join(int a, int b) const { return join_table[a][b]; }
  bool leq(int a, int b) const { return meet_table[a][b] == a; }

  int label_index(const std::string& s) const {
    for (int i = 0; i < size; ++i)
      if (labels[i] == s) return i;
    throw input_error("unknown lattice value '" + s + "' in " + name);
  }

  std::vector<std::pair<int, int>> covers() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < size; ++a)
      for (int b = 0; b < size; ++b) {
        if (a == b || !leq(a, b)) continue;
        bool strict_between = false;
        for (int z = 0; z < size && !strict_between; ++z)
          if (z != a && z != b && leq(a, z) && leq(z, b)) strict_between = true;
        if (!strict_between) out.emplace_back(a, b);
      }
    return out;
  }

  std::map<std::string, int> constant_map() const {
    std::map<std::string, int> m;
    for (int i = 0; i < size; ++i) m[labels[i]] = i;
    return m;
  }
};

inline void validate_lattice(const SmallLattice& L) {
  int n = L.size;
  if (n <= 0 || static_cast<int>(L.labels.size()) != n ||
      static_cast<int>(L.meet_table.size()) != n || static_cast<int>(L.join_table.size()) != n)
    throw input_error("lattice " + L.name + ": inconsistent sizes");
  for (int a = 0; a < n; ++a)
    if (static_cast<int>(L.meet_table[a].size()) != n ||
        static_cast<int>(L.join_table[a].size()) != n)
      throw input_error("lattice " + L.name + ": ragged tables");
  auto bad = [&L](const std::string& law) {
    throw input_error("lattice " + L.name + ": " + law + " fails");
  };
  for (int a = 0; a < n; ++a) {
    if (L.meet(a, a) != a || L.join(a, a) != a) bad("idempotence");
    for (int b = 0; b < n; ++b) {
      if (L.meet(a, b) != L.meet(b, a) || L.join(a, b) != L.join(b, a)) bad("commutativity");
      if (L.meet(a, L.join(a, b)) != a || L.join(a, L.meet(a, b)) != a) bad("absorption");
      for (int c = 0; c < n; ++c) {
        if (L.meet(L.meet(a, b), c) != L.meet(a, L.meet(b, c))) bad("meet associativity");
        if (L.join(L.join(a, b), c) != L.join(a, L.join(b, c))) bad("join associativity");
      }
    }
  }
}

// Build the tables from a covering description; fails unless every pair has
// a unique greatest lower and least upper bound.
inline SmallLattice lattice_from_covers(std::string name, int size,
                                        std::vector<std::pair<int, int>> covers,
                                        std::vector<std::string> labels) {
  Poset p = build_poset(size, std::move(covers), std::move(labels));
  SmallLattice L;
  L.name = std::move(name);
  L.size = size;
  L.labels = p.labels;
  L.meet_table.assign(size, std::vector<int>(size, -1));
  L.join_table.assign(size, std::vector<int>(size, -1));
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b) {
      std::vector<int> lower, upper;
      for (int z = 0; z < size; ++z) {
        if (p.leq(z, a) && p.leq(z, b)) lower.push_back(z);
        if (p.leq(a, z) && p.leq(b, z)) upper.push_back(z);
      }
      for (int z : lower)
        if (L.meet_table[a][b] < 0 || p.leq(L.meet_table[a][b], z)) L.meet_table[a][b] = z;
      for (int z : upper)
        if (L.join_table[a][b] < 0 || p.leq(z, L.join_table[a][b])) L.join_table[a][b] = z;
      if (L.meet_table[a][b] < 0 || L.join_table[a][b] < 0)
        throw input_error(L.name + " is not a lattice");
      for (int z : lower)
        if (!p.leq(z, L.meet_table[a][b])) throw input_error(L.name + " has no meet");
      for (int z : upper)
        if (!p.leq(L.join_table[a][b], z)) throw input_error(L.name + " has no join");
    }
  return L;
}

inline SmallLattice chain_lattice(int size) {
  if (size < 1) throw input_error("chain lattice needs size >= 1");
  std::vector<std::pair<int, int>> covers;
  std::vector<std::string> labels;
  for (int i = 0; i < size; ++i) labels.push_back(std::to_string(i));
  for (int i = 0; i + 1 < size; ++i) covers.emplace_back(i, i + 1);
  return lattice_from_covers("chain" + std::to_string(size), size, std::move(covers),
                             std::move(labels));
}

inline SmallLattice n5_lattice() {
  return lattice_from_covers("N5", 5, {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}},
                             {"0", "a", "b", "c", "1"});
}

inline SmallLattice m3_lattice() {
  return lattice_from_covers("M3", 5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}},
                             {"0", "a", "b", "c", "1"});
}

inline SmallLattice quo2_lattice() {
  return lattice_from_covers("Quo2", 4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}},
                             {"diag", "le", "ge", "full"});
}

// Tables for a whole (small) filter Quleq(P), values sorted for determinism.
inline SmallLattice lattice_from_quleq(const Poset& p, size_t max_count = 100000) {
  std::vector<QuasiRel> values = enumerate_quleq(p, max_count);
  std::sort(values.begin(), values.end());
  auto index_of = [&values](const QuasiRel& r) {
    auto it = std::lower_bound(values.begin(), values.end(), r);
    if (it == values.end() || *it != r) throw input_error("filter is not closed");
    return static_cast<int>(it - values.begin());
  };
  SmallLattice L;
  L.name = "quleq" + std::to_string(p.n);
  L.size = static_cast<int>(values.size());
  for (int i = 0; i < L.size; ++i) L.labels.push_back("q" + std::to_string(i));
  L.meet_table.assign(L.size, std::vector<int>(L.size, 0));
  L.join_table.assign(L.size, std::vector<int>(L.size, 0));
  for (int a = 0; a < L.size; ++a)
    for (int b = 0; b <= a; ++b) {
      int m = index_of(meet(values[a], values[b]));
      int j = index_of(join(values[a], values[b]));
      L.meet_table[a][b] = L.meet_table[b][a] = m;
      L.join_table[a][b] = L.join_table[b][a] = j;
    }
  return L;
}

struct Equation {
  TermPtr term;
  int value = 0;
};

struct EqSystem {
  int k = 0;  // unknowns x0..x(k-1); xm1 is an extra leading unknown if used
  bool uses_xm1 = false;
  std::vector<Equation> eqs;
  std::map<std::string, int> constants;  // extra names on top of the labels
};

namespace detail {
inline bool term_uses_xm1(const TermPtr& t) {
  if (t->kind == LatTerm::Kind::Var) return t->var == -1;
  for (const auto& k : t->kids)
    if (term_uses_xm1(k)) return true;
  return false;
}
}  // namespace detail

inline EqSystem make_system(const SmallLattice& L, const std::vector<Equation>& eqs,
                            std::map<std::string, int> constants = {}) {
  EqSystem sys;
  sys.eqs = eqs;
  sys.constants = std::move(constants);
  for (const auto& e : eqs) {
    if (e.value < 0 || e.value >= L.size) throw input_error("equation value out of range");
    sys.k = std::max(sys.k, term_arity(e.term));
    sys.uses_xm1 = sys.uses_xm1 || detail::term_uses_xm1(e.term);
  }
  return sys;
}

// One equation per line: "<term> = <value-label>".
inline EqSystem parse_equations(const std::string& text, const SmallLattice& L,
                                std::map<std::string, int> constants = {}) {
  std::vector<Equation> eqs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    size_t sep = line.rfind(" = ");
    if (sep == std::string::npos)
      throw input_error("line " + std::to_string(lineno) + ": expected '<term> = <value>'");
    std::string rhs = line.substr(sep + 3);
    while (!rhs.empty() && (rhs.back() == '\r' || rhs.back() == ' ')) rhs.pop_back();
    eqs.push_back({parse_term(line.substr(0, sep)), L.label_index(rhs)});
  }
  return make_system(L, eqs, std::move(constants));
}

inline std::string print_system(const EqSystem& sys, const SmallLattice& L) {
  std::string out;
  for (const auto& e : sys.eqs) out += print_term(e.term) + " = " + L.labels[e.value] + "\n";
  return out;
}

// Exhaustive solver; assignments ordered lexicographically with xm1 (when
// present) varying slowest, then x0, x1, ... The result vector lists the
// unknowns in that same order.
inline std::optional<std::vector<int>> solve_brute(const SmallLattice& L, const EqSystem& sys,
                                                   std::uint64_t budget = 20'000'000) {
  int slots = sys.k + (sys.uses_xm1 ? 1 : 0);
  std::uint64_t total = 1;
  for (int i = 0; i < slots; ++i) {
    total *= static_cast<std::uint64_t>(L.size);
    if (total > budget)
      throw budget_error("assignment space exceeds budget of " + std::to_string(budget));
  }
  std::map<std::string, int> consts = L.constant_map();
  for (const auto& [name, v] : sys.constants) consts[name] = v;
  auto fmeet = [&L](int a, int b) { return L.meet(a, b); };
  auto fjoin = [&L](int a, int b) { return L.join(a, b); };
  std::vector<int> slot_vals(slots, 0);
  for (std::uint64_t tick = 0;; ++tick) {
    std::span<const int> vars(slot_vals.data() + (sys.uses_xm1 ? 1 : 0),
                              static_cast<size_t>(sys.k));
    std::optional<int> xm1;
    if (sys.uses_xm1) xm1 = slot_vals[0];
    bool ok = true;
    for (const auto& e : sys.eqs)
      if (eval_term<int>(e.term, vars, consts, fmeet, fjoin, xm1) != e.value) {
        ok = false;
        break;
      }
    if (ok) return slot_vals;
    int pos = slots - 1;
    while (pos >= 0 && slot_vals[pos] == L.size - 1) slot_vals[pos--] = 0;
    if (pos < 0) return std::nullopt;
    ++slot_vals[pos];
  }
}

// CNF whose clauses are three distinct positive literals or two distinct
// negative literals; variables are 1-based.
struct CnfHK {
  int m = 0;
  std::vector<std::array<int, 3>> pos;
  std::vector<std::array<int, 2>> neg;
};

inline CnfHK make_cnfhk(int m, std::vector<std::array<int, 3>> pos,
                        std::vector<std::array<int, 2>> neg) {
  if (m < 0) throw input_error("negative variable count");
  auto check = [m](auto& clause) {
    for (size_t i = 0; i < clause.size(); ++i) {
      if (clause[i] < 1 || clause[i] > m)
        throw input_error("clause variable x" + std::to_string(clause[i]) + " out of range");
      for (size_t j = i + 1; j < clause.size(); ++j)
        if (clause[i] == clause[j])
          throw input_error("clause repeats variable x" + std::to_string(clause[i]));
    }
  };
  for (auto& c : pos) check(c);
  for (auto& c : neg) check(c);
  return {m, std::move(pos), std::move(neg)};
}

// Lines "P i j k" (positive clause) and "N i j" (negative clause); the
// variable count is the largest index seen.
inline CnfHK parse_cnfhk(const std::string& text) {
  std::vector<std::array<int, 3>> pos;
  std::vector<std::array<int, 2>> neg;
  int m = 0;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    auto grab = [&](int count) {
      std::vector<int> xs(count);
      for (int& x : xs)
        if (!(ls >> x)) throw input_error("line " + std::to_string(lineno) + ": short clause");
      int trailing;
      if (ls >> trailing) throw input_error("line " + std::to_string(lineno) + ": long clause");
      for (int x : xs) m = std::max(m, x);
      return xs;
    };
    if (kind == "P") {
      auto xs = grab(3);
      pos.push_back({xs[0], xs[1], xs[2]});
    } else if (kind == "N") {
      auto xs = grab(2);
      neg.push_back({xs[0], xs[1]});
    } else {
      throw input_error("line " + std::to_string(lineno) + ": unknown clause kind " + kind);
    }
  }
  return make_cnfhk(m, std::move(pos), std::move(neg));
}

// Unmasked clause polynomials: p1 the meet of positive-clause joins, p2 the
// join of negative-clause meets, so that h holds iff p1 = top and p2 = bottom.
inline TermPtr cnf_p1_raw(const CnfHK& h) {
  if (h.pos.empty()) return make_const("a1");
  std::vector<TermPtr> parts;
  for (const auto& c : h.pos)
    parts.push_back(make_join({make_var(c[0]), make_var(c[1]), make_var(c[2])}));
  return parts.size() == 1 ? parts[0] : make_meet(std::move(parts));
}

inline TermPtr cnf_p2_raw(const CnfHK& h) {
  if (h.neg.empty()) return make_const("a0");
  std::vector<TermPtr> parts;
  for (const auto& c : h.neg) parts.push_back(make_meet({make_var(c[0]), make_var(c[1])}));
  return parts.size() == 1 ? parts[0] : make_join(std::move(parts));
}

inline std::optional<std::vector<int>> sat_brute(const CnfHK& h) {
  if (h.m > 24) throw budget_error("sat_brute refuses m > 24");
  SmallLattice two = chain_lattice(2);
  std::map<std::string, int> consts{{"a0", 0}, {"a1", 1}, {"0", 0}, {"1", 1}};
  TermPtr p1 = cnf_p1_raw(h), p2 = cnf_p2_raw(h);
  auto fmeet = [](int a, int b) { return a < b ? a : b; };
  auto fjoin = [](int a, int b) { return a > b ? a : b; };
  for (std::uint64_t bits = 0; bits < (1ull << h.m); ++bits) {
    std::vector<int> g(h.m + 1, 0);  // g[0] unused; variables are 1-based
    for (int i = 1; i <= h.m; ++i) g[i] = (bits >> (h.m - i)) & 1 ? 1 : 0;
    bool ok = true;
    for (const auto& c : h.pos)
      if (!(g[c[0]] || g[c[1]] || g[c[2]])) {
        ok = false;
        break;
      }
    for (const auto& c : h.neg)
      if (ok && g[c[0]] && g[c[1]]) ok = false;
    std::span<const int> vars(g);
    bool poly = eval_term<int>(p1, vars, consts, fmeet, fjoin) == 1 &&
                eval_term<int>(p2, vars, consts, fmeet, fjoin) == 0;
    if (poly != ok) throw verify_error("clause polynomial disagrees with direct evaluation");
    if (ok) {
      g.erase(g.begin());
      return g;
    }
  }
  return std::nullopt;
}

// The 4-equation system {xm1 = a0, x0 = a1, p1 = a1, p2 = a0} whose terms act
// on the masked unknowns ((xi v xm1) ^ x0); solvable over L iff h is
// satisfiable. a1 must cover a0.
inline EqSystem reduce_cnfhk(const CnfHK& h, const SmallLattice& L, int a0, int a1) {
  if (a0 < 0 || a1 < 0 || a0 >= L.size || a1 >= L.size)
    throw input_error("covering pair out of range");
  auto cv = L.covers();
  if (std::find(cv.begin(), cv.end(), std::make_pair(a0, a1)) == cv.end())
    throw input_error(L.labels[a1] + " does not cover " + L.labels[a0] + " in " + L.name);
  std::vector<TermPtr> masked(h.m + 1);
  for (int i = 1; i <= h.m; ++i)
    masked[i] = make_meet({make_join({make_var(i), make_var(-1)}), make_var(0)});
  TermPtr p1, p2;
  if (h.pos.empty()) {
    p1 = make_const("a1");
  } else {
    std::vector<TermPtr> parts;
    for (const auto& c : h.pos)
      parts.push_back(make_join({masked[c[0]], masked[c[1]], masked[c[2]]}));
    p1 = parts.size() == 1 ? parts[0] : make_meet(std::move(parts));
  }
  if (h.neg.empty()) {
    p2 = make_const("a0");
  } else {
    std::vector<TermPtr> parts;
    for (const auto& c : h.neg) parts.push_back(make_meet({masked[c[0]], masked[c[1]]}));
    p2 = parts.size() == 1 ? parts[0] : make_join(std::move(parts));
  }
  EqSystem sys;
  sys.k = h.m + 1;
  sys.uses_xm1 = true;
  sys.constants = {{"a0", a0}, {"a1", a1}};
  sys.eqs.push_back({make_var(-1), a0});
  sys.eqs.push_back({make_var(0), a1});
  sys.eqs.push_back({p1, a1});
  sys.eqs.push_back({p2, a0});
  return sys;
}

// The canonical solution the reduction promises for a satisfying assignment:
// xm1 = a0, x0 = a1, xi = a1 where g sets the variable and a0 elsewhere.
inline std::vector<int> lift_witness(const CnfHK& h, const std::vector<int>& g, int a0, int a1) {
  if (static_cast<int>(g.size()) != h.m) throw input_error("witness length mismatch");
  std::vector<int> slots{a0, a1};
  for (int i = 0; i < h.m; ++i) slots.push_back(g[i] ? a1 : a0);
  return slots;
}

inline bool check_solution(const SmallLattice& L, const EqSystem& sys,
                           const std::vector<int>& slots) {
  int want = sys.k + (sys.uses_xm1 ? 1 : 0);
  if (static_cast<int>(slots.size()) != want) throw input_error("solution length mismatch");
  std::map<std::string, int> consts = L.constant_map();
  for (const auto& [name, v] : sys.constants) consts[name] = v;
  std::span<const int> vars(slots.data() + (sys.uses_xm1 ? 1 : 0), static_cast<size_t>(sys.k));
  std::optional<int> xm1;
  if (sys.uses_xm1) xm1 = slots[0];
  for (const auto& e : sys.eqs)
    if (eval_term<int>(e.term, vars, consts, [&L](int a, int b) { return L.meet(a, b); },
                       [&L](int a, int b) { return L.join(a, b); },
                       xm1) != e.value)
      return false;
  return true;
}

}  // namespace quleq

#endif
