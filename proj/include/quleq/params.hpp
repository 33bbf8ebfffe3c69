#ifndef QULEQ_PARAMS_HPP
#define QULEQ_PARAMS_HPP

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "quleq/poset.hpp"
#include "quleq/quolattice.hpp"

namespace quleq {

struct TreeOptions {
  int size_bound = 6;           // largest component the subset search will touch
  size_t max_lattice = 300000;  // enumeration cap for Quleq(T)
  size_t max_subsets = 2'000'000;
};

struct TreeParam {
  int value = 0;
  std::vector<QuasiRel> witness;  // the (value-1)-element helper set, local ids
};

// Smallest k such that some (k-1)-element subset of Quleq(T), together with
// the quasiorders reversing one covering edge each, generates Quleq(T).
// Singletons get 0 and nontrivial chains 1 outright.
inline TreeParam tree_parameter(const Poset& t, const TreeOptions& opts = {}) {
  ComponentInfo info = components(t);
  if (info.count() != 1) throw input_error("tree parameter needs a connected poset");
  if (t.n == 1) return {0, {}};
  if (info.chain_flag[0]) return {1, {}};
  if (t.n > opts.size_bound)
    throw budget_error("tree parameter search refused for a component of " +
                       std::to_string(t.n) + " elements (bound " +
                       std::to_string(opts.size_bound) + ")");
  std::vector<QuasiRel> lattice = enumerate_quleq(t, opts.max_lattice);
  std::vector<QuasiRel> edge_rels;
  for (auto [x, y] : t.covers) edge_rels.push_back(qum_pair(t, y, x));
  ClosureOptions copts;
  copts.max_elems = lattice.size() + 2;
  copts.targets = all_pair_qums(t);
  auto generates = [&](const std::vector<QuasiRel>& extra) {
    std::vector<QuasiRel> gens = edge_rels;
    gens.insert(gens.end(), extra.begin(), extra.end());
    LatticeSnapshot snap = close_with_witnesses(gens, t.order, copts);
    return snap.missing_targets.empty();
  };
  size_t tried = 0;
  int m = static_cast<int>(lattice.size());
  for (int k = 1; k <= m + 1; ++k) {
    int pick = k - 1;
    std::vector<int> idx(pick);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      if (++tried > opts.max_subsets)
        throw budget_error("tree parameter search exceeded the subset budget");
      std::vector<QuasiRel> extra;
      for (int i : idx) extra.push_back(lattice[i]);
      if (generates(extra)) return {k, extra};
      int pos = pick - 1;
      while (pos >= 0 && idx[pos] == m - pick + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int q = pos + 1; q < pick; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  throw verify_error("tree parameter search exhausted all subsets");
}

namespace detail {

// Canonical order-matrix string under relabeling; only used for small posets.
inline std::string canonical_form(const Poset& p) {
  if (p.n > 8) throw budget_error("canonical form limited to 8 elements");
  std::vector<int> perm(p.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string s(static_cast<size_t>(p.n) * p.n, '0');
    for (int i = 0; i < p.n; ++i)
      for (int j = 0; j < p.n; ++j)
        if (p.order.get(perm[i], perm[j])) s[static_cast<size_t>(i) * p.n + j] = '1';
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

struct PosetParams {
  int component_count = 0;  // ncmp
  int max_size = 0;         // ncs
  int max_edges = 0;        // ncedge
  int max_extremals = 0;    // ncextr
  bool forest = false;
  std::optional<std::pair<int, int>> selectors;  // two component ids, needs ncmp >= 3
  int tp1 = -1, tp2 = -1;
  int correction = -1;                     // ncorr = tp1 + tp2
  std::vector<QuasiRel> selector_witness1;  // helper sets on component-local ids
  std::vector<QuasiRel> selector_witness2;
};

// Numeric parameters of a poset, plus the two selector components: the pair
// with the least tree parameters, ties broken by fewer elements then smaller
// component id. Tree parameters of non-chain components are searched only
// when the choice needs them; isomorphic components share one search.
inline PosetParams compute_params(const Poset& p, const TreeOptions& opts = {}) {
  ComponentInfo info = components(p);
  PosetParams out;
  out.component_count = info.count();
  for (int c = 0; c < info.count(); ++c) {
    out.max_size = std::max(out.max_size, static_cast<int>(info.members[c].size()));
    out.max_edges = std::max(out.max_edges, static_cast<int>(info.edges[c].size()));
    out.max_extremals = std::max(out.max_extremals, static_cast<int>(info.extremal[c].size()));
  }
  out.forest = info.forest();
  if (info.count() < 3) return out;

  struct Entry {
    int ntp;      // exact, or the optimistic lower bound 1
    bool exact;
    int size;
    int comp;
  };
  std::vector<Entry> entries;
  for (int c = 0; c < info.count(); ++c) {
    int size = static_cast<int>(info.members[c].size());
    if (size == 1)
      entries.push_back({0, true, size, c});
    else if (info.chain_flag[c])
      entries.push_back({1, true, size, c});
    else
      entries.push_back({1, false, size, c});
  }
  auto key_less = [](const Entry& a, const Entry& b) {
    return std::tie(a.ntp, a.size, a.comp) < std::tie(b.ntp, b.size, b.comp);
  };
  std::map<std::string, int> iso_cache;
  auto resolve = [&](Entry& e) {
    auto [sub, mem] = component_poset(p, info, e.comp);
    std::string key = detail::canonical_form(sub);
    auto hit = iso_cache.find(key);
    if (hit != iso_cache.end())
      e.ntp = hit->second;
    else
      iso_cache[key] = e.ntp = tree_parameter(sub, opts).value;
    e.exact = true;
  };
  std::vector<int> chosen;
  while (chosen.size() < 2) {
    auto top = std::min_element(entries.begin(), entries.end(), key_less);
    if (!top->exact) {
      resolve(*top);
      continue;
    }
    chosen.push_back(top->comp);
    if (chosen.size() == 1) out.tp1 = top->ntp;
    else out.tp2 = top->ntp;
    top->ntp = std::numeric_limits<int>::max() / 2;
  }
  out.selectors = {chosen[0], chosen[1]};
  out.correction = out.tp1 + out.tp2;
  auto witness_of = [&](int c, int expect) {
    auto [sub, mem] = component_poset(p, info, c);
    if (sub.n == 1 || components(sub).chain_flag[0]) return std::vector<QuasiRel>{};
    TreeParam tp = tree_parameter(sub, opts);
    if (tp.value != expect) throw verify_error("tree parameter changed between runs");
    return tp.witness;
  };
  out.selector_witness1 = witness_of(chosen[0], out.tp1);
  out.selector_witness2 = witness_of(chosen[1], out.tp2);
  return out;
}

}  // namespace quleq

#endif
