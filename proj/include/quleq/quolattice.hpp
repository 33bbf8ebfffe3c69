#ifndef QULEQ_QUOLATTICE_HPP
#define QULEQ_QUOLATTICE_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "quleq/error.hpp"
#include "quleq/latterm.hpp"
#include "quleq/poset.hpp"
#include "quleq/relation.hpp"

namespace quleq {

// Least quasiorder containing one pair.
inline QuasiRel quo_pair(int n, int x, int y) {
  QuasiRel r(n, true);
  r.set(x, y);
  return r;
}

// Least extension of the poset order containing (x,y): the order plus the
// rectangle (down-set of x) times (up-set of y). Already closed.
inline QuasiRel qum_pair(const Poset& p, int x, int y) {
  QuasiRel r = p.order;
  for (int i = 0; i < p.n; ++i) {
    if (!p.leq(i, x)) continue;
    for (int j = 0; j < p.n; ++j)
      if (p.leq(y, j)) r.set(i, j);
  }
  return r;
}

// Least extension of the order containing a whole set of pairs.
inline QuasiRel qum_set(const Poset& p, const std::vector<std::pair<int, int>>& pairs) {
  QuasiRel r = p.order;
  for (auto [x, y] : pairs) {
    if (x < 0 || x >= p.n || y < 0 || y >= p.n) throw input_error("pair out of range");
    r.set(x, y);
  }
  r.close();
  return r;
}

// Order plus the square of one component.
inline QuasiRel nabla_plus(const Poset& p, const std::vector<int>& component_members) {
  QuasiRel r = p.order;
  for (int x : component_members)
    for (int y : component_members) r.set(x, y);
  return r;
}

// Embed a quasiorder rho on the index set of X into Quleq(P), where X meets
// every component of P at most once: rho maps to the closure of order + rho.
inline QuasiRel phi_embed(const Poset& p, const std::vector<int>& X, const QuasiRel& rho) {
  if (rho.dim() != static_cast<int>(X.size()))
    throw input_error("phi_embed: relation dimension must match |X|");
  ComponentInfo info = components(p);
  std::vector<int> hits(info.count(), 0);
  for (int x : X) {
    if (x < 0 || x >= p.n) throw input_error("phi_embed: element out of range");
    if (++hits[info.comp_of[x]] > 1)
      throw input_error("phi_embed: X meets a component more than once");
  }
  QuasiRel r = p.order;
  int m = rho.dim();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (rho.get(i, j)) r.set(X[i], X[j]);
  r.close();
  return r;
}

// Known sizes of Quo on n points, for refusal messages and checks.
inline const std::vector<std::uint64_t>& quo_size_table() {
  static const std::vector<std::uint64_t> table = {1, 1, 4, 29, 355, 6942, 209527, 9535241};
  return table;
}

// All closed supersets of a quasiorder, in depth-first branch order over the
// lexicographic pair list. Throws budget_error past max_count elements.
inline std::vector<QuasiRel> enumerate_filter(const QuasiRel& base, size_t max_count) {
  if (!base.is_reflexive() || !base.is_transitive())
    throw input_error("enumeration base must be a quasiorder");
  int n = base.dim();
  std::vector<std::pair<int, int>> free_pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !base.get(i, j)) free_pairs.emplace_back(i, j);
  std::vector<QuasiRel> out;
  auto add_closed = [n](const QuasiRel& r, int i, int j) {
    QuasiRel s = r;
    const std::uint64_t* rj = s.row(j);
    std::vector<std::uint64_t> delta(rj, rj + s.words_per_row());
    for (int p = 0; p < n; ++p) {
      if (!s.get(p, i)) continue;
      std::uint64_t* rp = s.row(p);
      for (int w = 0; w < s.words_per_row(); ++w) rp[w] |= delta[w];
    }
    return s;
  };
  auto disjoint = [](const QuasiRel& a, const QuasiRel& b) {
    for (int i = 0; i < a.dim(); ++i)
      for (int w = 0; w < a.words_per_row(); ++w)
        if (a.row(i)[w] & b.row(i)[w]) return false;
    return true;
  };
  auto walk = [&](auto&& self, const QuasiRel& r, QuasiRel& forbidden, size_t t) -> void {
    while (t < free_pairs.size()) {
      auto [i, j] = free_pairs[t];
      if (r.get(i, j)) {
        ++t;
        continue;
      }
      if (forbidden.get(i, j)) {
        ++t;
        continue;
      }
      QuasiRel with = add_closed(r, i, j);
      if (disjoint(with, forbidden)) self(self, with, forbidden, t + 1);
      forbidden.set(i, j);
      self(self, r, forbidden, t + 1);
      forbidden.set(i, j, false);
      return;
    }
    if (out.size() >= max_count)
      throw budget_error("enumeration exceeds the budget of " + std::to_string(max_count) +
                         " elements");
    out.push_back(r);
  };
  QuasiRel forbidden(n);
  walk(walk, base, forbidden, 0);
  return out;
}

inline std::vector<QuasiRel> enumerate_quleq(const Poset& p, size_t max_count = 10'000'000) {
  return enumerate_filter(p.order, max_count);
}

inline std::vector<QuasiRel> enumerate_quo(int n, int max_n = 6,
                                           size_t max_count = 10'000'000) {
  if (n <= 0) throw input_error("enumerate_quo needs n >= 1");
  if (n > max_n) {
    std::string msg = "refusing to enumerate Quo on " + std::to_string(n) +
                      " points (bound " + std::to_string(max_n) + "); known sizes:";
    const auto& tbl = quo_size_table();
    for (size_t k = 1; k < tbl.size(); ++k)
      msg += " |Quo " + std::to_string(k) + "|=" + std::to_string(tbl[k]);
    msg += ", growth is doubly rapid beyond that";
    throw budget_error(msg);
  }
  return enumerate_filter(QuasiRel::diagonal(n), max_count);
}

struct ClosureOptions {
  size_t max_elems = 5'000'000;
  std::optional<std::vector<QuasiRel>> targets;
  bool stop_when_targets_found = true;
};

// Sublattice generated by `gens` inside the complete lattice of quasiorders
// above `bottom`, grown level by level under binary meet and join. Every
// element carries a witness term over x0,x1,... (the generators, in order)
// and the constant #bot.
struct LatticeSnapshot {
  std::vector<QuasiRel> values;
  std::vector<TermPtr> witnesses;
  std::vector<int> levels;
  bool complete = false;
  std::vector<QuasiRel> missing_targets;

  size_t size() const { return values.size(); }

  int find(const QuasiRel& r) const {
    auto it = index_.find(r.hash());
    if (it == index_.end()) return -1;
    for (int i : it->second)
      if (values[i] == r) return i;
    return -1;
  }

  bool contains(const QuasiRel& r) const { return find(r) >= 0; }

  int insert(const QuasiRel& r, TermPtr witness, int level) {
    int existing = find(r);
    if (existing >= 0) return -1;
    int id = static_cast<int>(values.size());
    index_[r.hash()].push_back(id);
    values.push_back(r);
    witnesses.push_back(std::move(witness));
    levels.push_back(level);
    return id;
  }

 private:
  std::unordered_map<std::uint64_t, std::vector<int>> index_;
};

inline LatticeSnapshot close_with_witnesses(const std::vector<QuasiRel>& gens,
                                            const QuasiRel& bottom,
                                            const ClosureOptions& opts = {}) {
  LatticeSnapshot snap;
  snap.insert(bottom, make_const("bot"), 0);
  for (size_t g = 0; g < gens.size(); ++g) {
    if (gens[g].dim() != bottom.dim()) throw input_error("generator dimension mismatch");
    if (!bottom.subset_of(gens[g]))
      throw input_error("generator " + std::to_string(g) + " is not above the bottom");
    snap.insert(gens[g], make_var(static_cast<int>(g)), 0);
  }
  size_t remaining = 0;
  std::vector<bool> found;
  if (opts.targets) {
    found.assign(opts.targets->size(), false);
    for (size_t t = 0; t < opts.targets->size(); ++t)
      if (snap.contains((*opts.targets)[t])) found[t] = true;
    remaining = static_cast<size_t>(std::count(found.begin(), found.end(), false));
  }
  auto refresh_targets = [&](const QuasiRel& v) {
    if (!opts.targets || remaining == 0) return;
    for (size_t t = 0; t < opts.targets->size(); ++t)
      if (!found[t] && (*opts.targets)[t] == v) {
        found[t] = true;
        --remaining;
      }
  };
  for (size_t i = 1; i < snap.size(); ++i) refresh_targets(snap.values[i]);
  auto finish = [&](bool closed) {
    snap.complete = closed;
    if (opts.targets)
      for (size_t t = 0; t < opts.targets->size(); ++t)
        if (!found[t]) snap.missing_targets.push_back((*opts.targets)[t]);
    return snap;
  };
  if (opts.targets && remaining == 0 && opts.stop_when_targets_found) return finish(false);

  size_t level_start = 0;
  int level = 0;
  while (level_start < snap.size()) {
    size_t level_end = snap.size();
    ++level;
    for (size_t b = level_start; b < level_end; ++b)
      for (size_t a = 0; a <= b; ++a) {
        for (int op = 0; op < 2; ++op) {
          QuasiRel v = op == 0 ? meet(snap.values[a], snap.values[b])
                               : join(snap.values[a], snap.values[b]);
          if (snap.find(v) >= 0) continue;
          if (snap.size() >= opts.max_elems) return finish(false);
          TermPtr w = op == 0 ? make_meet({snap.witnesses[a], snap.witnesses[b]})
                              : make_join({snap.witnesses[a], snap.witnesses[b]});
          snap.insert(v, std::move(w), level);
          refresh_targets(v);
          if (opts.targets && remaining == 0 && opts.stop_when_targets_found)
            return finish(false);
        }
      }
    level_start = level_end;
  }
  return finish(true);
}

// One random element of Quleq(P): the order joined with a few random pairs.
inline QuasiRel random_quleq_element(const Poset& p, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, std::max(1, p.n));
  std::uniform_int_distribution<int> pick(0, p.n - 1);
  QuasiRel r = p.order;
  int extra = count(rng);
  for (int k = 0; k < extra; ++k) r.set(pick(rng), pick(rng));
  r.close();
  return r;
}

// Deduplicated list of qum over all ordered pairs; contains the order itself
// (from comparable pairs) exactly when some pair is comparable.
inline std::vector<QuasiRel> all_pair_qums(const Poset& p) {
  std::vector<QuasiRel> out;
  LatticeSnapshot seen;
  for (int x = 0; x < p.n; ++x)
    for (int y = 0; y < p.n; ++y) {
      if (x == y) continue;
      QuasiRel q = qum_pair(p, x, y);
      if (seen.insert(q, nullptr, 0) >= 0) out.push_back(q);
    }
  return out;
}

}  // namespace quleq

#endif
