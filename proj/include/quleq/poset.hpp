#ifndef QULEQ_POSET_HPP
#define QULEQ_POSET_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quleq/error.hpp"
#include "quleq/relation.hpp"

namespace quleq {

// Finite poset on {0,...,n-1}. `order` is the reflexive order relation,
// `covers` its transitive reduction, sorted lexicographically.
struct Poset {
  int n = 0;
  std::vector<std::pair<int, int>> covers;
  QuasiRel order;
  std::vector<std::string> labels;

  bool leq(int x, int y) const { return order.get(x, y); }
  bool lt(int x, int y) const { return x != y && order.get(x, y); }
};

namespace detail {

inline std::vector<std::pair<int, int>> reduction_of(const QuasiRel& order) {
  int n = order.dim();
  std::vector<std::pair<int, int>> covers;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y || !order.get(x, y)) continue;
      bool between = false;
      for (int z = 0; z < n && !between; ++z)
        if (z != x && z != y && order.get(x, z) && order.get(z, y)) between = true;
      if (!between) covers.emplace_back(x, y);
    }
  std::sort(covers.begin(), covers.end());
  return covers;
}

}  // namespace detail

inline Poset build_poset(int n, std::vector<std::pair<int, int>> covers,
                         std::vector<std::string> labels = {}) {
  if (n <= 0) throw input_error("poset needs at least one element");
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw input_error("label list length must equal n");
  std::sort(covers.begin(), covers.end());
  covers.erase(std::unique(covers.begin(), covers.end()), covers.end());
  QuasiRel rel(n, true);
  for (auto [x, y] : covers) {
    if (x < 0 || x >= n || y < 0 || y >= n) throw input_error("cover element out of range");
    if (x == y) throw input_error("cover relates an element to itself");
    rel.set(x, y);
  }
  rel.close();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (rel.get(x, y) && rel.get(y, x))
        throw input_error("cover list has a cycle through elements " + std::to_string(x) +
                          " and " + std::to_string(y));
  Poset p;
  p.n = n;
  p.order = rel;
  p.covers = detail::reduction_of(rel);
  p.labels = std::move(labels);
  return p;
}

inline Poset antichain(int m) {
  if (m <= 0) throw input_error("antichain needs at least one element");
  return build_poset(m, {});
}

// Chain with `len` covering edges, so len+1 elements; chain(0) is a singleton.
inline Poset chain(int len) {
  if (len < 0) throw input_error("chain length must be nonnegative");
  std::vector<std::pair<int, int>> covers;
  for (int i = 0; i < len; ++i) covers.emplace_back(i, i + 1);
  return build_poset(len + 1, covers);
}

// Four elements 0 < a < b, a < c with b and c incomparable.
inline Poset y_poset() {
  return build_poset(4, {{0, 1}, {1, 2}, {1, 3}}, {"0", "a", "b", "c"});
}

inline Poset cardinal_sum(const std::vector<Poset>& parts) {
  if (parts.empty()) throw input_error("cardinal sum of no posets");
  int n = 0;
  std::vector<std::pair<int, int>> covers;
  bool any_labels = false;
  for (const Poset& p : parts) any_labels = any_labels || !p.labels.empty();
  std::vector<std::string> labels;
  for (size_t k = 0; k < parts.size(); ++k) {
    const Poset& p = parts[k];
    for (auto [x, y] : p.covers) covers.emplace_back(n + x, n + y);
    if (any_labels)
      for (int i = 0; i < p.n; ++i)
        labels.push_back((p.labels.empty() ? std::to_string(i) : p.labels[i]) + "." +
                         std::to_string(k));
    n += p.n;
  }
  return build_poset(n, std::move(covers), std::move(labels));
}

inline Poset sum_of_copies(const Poset& part, int count) {
  if (count <= 0) throw input_error("need at least one summand");
  return cardinal_sum(std::vector<Poset>(count, part));
}

// Seven components: a six-element tree with four extremal elements, two
// four-element Y posets, chains with 3, 2, 1 and 1 edges.
inline Poset figure1() {
  Poset tree = build_poset(6, {{0, 1}, {1, 2}, {2, 3}, {4, 2}, {2, 5}});
  return cardinal_sum({tree, y_poset(), chain(3), chain(2), chain(1), chain(1), y_poset()});
}

// Two singletons plus twelve chains of five elements each.
inline Poset figure2() {
  std::vector<Poset> parts(2, antichain(1));
  parts.insert(parts.end(), 12, chain(4));
  return cardinal_sum(parts);
}

struct ComponentInfo {
  std::vector<int> comp_of;                       // element -> component id
  std::vector<std::vector<int>> members;          // sorted; components ordered by least member
  std::vector<std::vector<std::pair<int, int>>> edges;  // covers inside each component
  std::vector<std::vector<int>> maximal;
  std::vector<std::vector<int>> minimal;
  std::vector<std::vector<int>> extremal;         // maximal union minimal, sorted
  std::vector<bool> chain_flag;                   // totally ordered component
  std::vector<bool> tree_flag;                    // acyclic covering graph

  int count() const { return static_cast<int>(members.size()); }
  bool forest() const {
    return std::all_of(tree_flag.begin(), tree_flag.end(), [](bool t) { return t; });
  }
};

inline ComponentInfo components(const Poset& p) {
  std::vector<int> parent(p.n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [x, y] : p.covers) {
    int a = find(x), b = find(y);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  ComponentInfo info;
  info.comp_of.assign(p.n, -1);
  for (int i = 0; i < p.n; ++i) {
    int r = find(i);
    if (info.comp_of[r] < 0) {
      info.comp_of[r] = info.count();
      info.members.emplace_back();
    }
    info.comp_of[i] = info.comp_of[r];
    info.members[info.comp_of[i]].push_back(i);
  }
  int m = info.count();
  info.edges.resize(m);
  info.maximal.resize(m);
  info.minimal.resize(m);
  info.extremal.resize(m);
  info.chain_flag.assign(m, true);
  info.tree_flag.assign(m, false);
  for (auto [x, y] : p.covers) info.edges[info.comp_of[x]].emplace_back(x, y);
  for (int c = 0; c < m; ++c) {
    std::sort(info.edges[c].begin(), info.edges[c].end());
    const auto& mem = info.members[c];
    for (int x : mem) {
      bool has_above = false, has_below = false;
      for (int y : mem) {
        if (y == x) continue;
        if (p.order.get(x, y)) has_above = true;
        if (p.order.get(y, x)) has_below = true;
        if (!p.order.get(x, y) && !p.order.get(y, x)) info.chain_flag[c] = false;
      }
      if (!has_above) info.maximal[c].push_back(x);
      if (!has_below) info.minimal[c].push_back(x);
    }
    info.extremal[c] = info.maximal[c];
    for (int x : info.minimal[c])
      if (!std::binary_search(info.maximal[c].begin(), info.maximal[c].end(), x))
        info.extremal[c].push_back(x);
    std::sort(info.extremal[c].begin(), info.extremal[c].end());
    info.tree_flag[c] = info.edges[c].size() + 1 == mem.size();
  }
  return info;
}

// Restriction of the poset to one component, with the mapping back.
inline std::pair<Poset, std::vector<int>> component_poset(const Poset& p, const ComponentInfo& info,
                                                          int c) {
  const auto& mem = info.members[c];
  std::vector<int> local(p.n, -1);
  for (size_t i = 0; i < mem.size(); ++i) local[mem[i]] = static_cast<int>(i);
  std::vector<std::pair<int, int>> covers;
  for (auto [x, y] : info.edges[c]) covers.emplace_back(local[x], local[y]);
  std::vector<std::string> labels;
  if (!p.labels.empty())
    for (int x : mem) labels.push_back(p.labels[x]);
  return {build_poset(static_cast<int>(mem.size()), std::move(covers), std::move(labels)), mem};
}

// Collapse the mu-equivalent classes (mu meet its converse) of a quasiorder.
// Returns the quotient poset and the element -> block map.
inline std::pair<Poset, std::vector<int>> quotient_by_theta(const QuasiRel& mu) {
  int n = mu.dim();
  if (n <= 0) throw input_error("quotient of an empty relation");
  if (!mu.is_reflexive() || !mu.is_transitive())
    throw input_error("quotient input must be a quasiorder");
  std::vector<int> block(n, -1);
  std::vector<int> reps;
  for (int i = 0; i < n; ++i) {
    if (block[i] >= 0) continue;
    block[i] = static_cast<int>(reps.size());
    for (int j = i + 1; j < n; ++j)
      if (mu.get(i, j) && mu.get(j, i)) block[j] = block[i];
    reps.push_back(i);
  }
  int m = static_cast<int>(reps.size());
  QuasiRel ord(m, true);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (mu.get(reps[a], reps[b])) ord.set(a, b);
  Poset q;
  q.n = m;
  q.order = ord;
  q.covers = detail::reduction_of(ord);
  return {q, block};
}

}  // namespace quleq

#endif
