#ifndef QULEQ_GENSET_HPP
#define QULEQ_GENSET_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "quleq/latterm.hpp"
#include "quleq/params.hpp"
#include "quleq/poset.hpp"
#include "quleq/quolattice.hpp"
#include "quleq/relation.hpp"

namespace quleq {

using bigint = boost::multiprecision::cpp_int;

// Smallest k whose central binomial coefficient C(k, floor(k/2)) reaches n;
// 0 for n = 0. This is the number of generators a Boolean lattice with n
// atoms needs, via Sperner antichains.
inline int lasp_big(const bigint& n) {
  if (n < 0) throw input_error("lasp needs a nonnegative argument");
  if (n == 0) return 0;
  for (int k = 1;; ++k) {
    bigint binom = 1;
    for (int i = 1; i <= k / 2; ++i) binom = binom * (k - i + 1) / i;
    if (binom >= n) return k;
  }
}

inline int lasp(std::uint64_t n) { return lasp_big(bigint(n)); }

inline int lasp_decimal(const std::string& digits) {
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw input_error("lasp argument must be a decimal number");
  return lasp_big(bigint(digits));
}

// Smallest known generating-set size of Quo on n points.
inline int f_card(std::uint64_t n) {
  if (n == 0) throw input_error("f_card needs n >= 1");
  switch (n) {
    case 1: return 0;
    case 2: return 2;
    case 3: return 4;
    case 4: return 5;
    default: return 4;
  }
}

// Sperner-style generating family of the powerset of m atoms: k = lasp(m)
// blocks B_i (one per atom, pairwise incomparable) and the k generator sets
// X_j = { atoms whose block contains j }. Every atom is the intersection of
// the X_j containing it.
struct BooleanGenerators {
  int atom_count = 0;
  int k = 0;
  std::vector<std::vector<int>> blocks;  // per atom, subset of {0..k-1}
  std::vector<std::vector<int>> sets;    // per generator, subset of atoms
};

inline BooleanGenerators boolean_generators(int m) {
  if (m < 1) throw input_error("boolean_generators needs m >= 1");
  BooleanGenerators bg;
  bg.atom_count = m;
  if (m == 1) {
    bg.k = 1;
    bg.blocks = {{0}};
    bg.sets = {{0}};
    return bg;
  }
  bg.k = lasp(static_cast<std::uint64_t>(m));
  int c = bg.k / 2;
  std::vector<int> cur(c);
  std::iota(cur.begin(), cur.end(), 0);
  for (int i = 0; i < m; ++i) {
    bg.blocks.push_back(cur);
    int pos = 0;
    while (pos + 1 < c && cur[pos] + 1 == cur[pos + 1]) ++pos;
    ++cur[pos];
    for (int q = 0; q < pos; ++q) cur[q] = q;
  }
  bg.sets.assign(bg.k, {});
  for (int i = 0; i < m; ++i)
    for (int j : bg.blocks[i]) bg.sets[j].push_back(i);
  return bg;
}

// Reversed covering edges grouped so that no group takes two edges from one
// component: group j collects the j-th edge of every component that has one.
using StripPartition = std::vector<std::vector<std::pair<int, int>>>;

inline StripPartition make_strips(const ComponentInfo& info) {
  size_t width = 0;
  for (const auto& e : info.edges) width = std::max(width, e.size());
  StripPartition strips(width);
  for (int c = 0; c < info.count(); ++c)
    for (size_t j = 0; j < info.edges[c].size(); ++j)
      strips[j].emplace_back(info.edges[c][j].second, info.edges[c][j].first);
  return strips;
}

// Extremal transversals: thread i holds, for every component, its extremal
// element number i modulo the component's extremal count.
using ThreadCover = std::vector<std::vector<int>>;

inline ThreadCover make_threads(const ComponentInfo& info, int count) {
  ThreadCover threads(count);
  for (int i = 0; i < count; ++i) {
    threads[i].resize(info.count());
    for (int c = 0; c < info.count(); ++c)
      threads[i][c] = info.extremal[c][i % info.extremal[c].size()];
  }
  return threads;
}

struct QuoSearchOptions {
  std::uint64_t seed = 1;
  int restarts = 300;
  int steps = 600;
  size_t closure_cap = 20000;
  int enum_bound = 6;
  int extra_target_slack = 2;  // how far past target_size the retry loop goes
};

struct QuoSearchResult {
  std::vector<QuasiRel> gens;
  int target = 0;
  int achieved = 0;
  bool met = false;
};

namespace detail {

// Generating sets found by earlier search runs, replayed before climbing.
inline const std::map<std::pair<int, int>, std::vector<std::vector<std::pair<int, int>>>>&
known_quo_generators() {
  static const std::map<std::pair<int, int>, std::vector<std::vector<std::pair<int, int>>>> table =
      {
          {{2, 2}, {{{0, 1}}, {{1, 0}}}},
          {{3, 4},
           {{{0, 1}, {0, 2}, {1, 2}, {2, 1}},
            {{0, 2}, {2, 0}},
            {{1, 0}, {1, 2}, {2, 0}, {2, 1}},
            {{0, 1}, {1, 0}}}},
          {{4, 5},
           {{{0, 2}, {0, 3}, {1, 2}, {3, 2}},
            {{0, 1}, {1, 0}, {2, 0}, {2, 1}, {2, 3}},
            {{0, 1}, {0, 2}, {1, 0}, {1, 2}},
            {{1, 3}, {2, 1}, {2, 3}, {3, 1}},
            {{2, 0}, {3, 0}, {3, 1}, {3, 2}}}},
          {{5, 4},
           {{{1, 4}, {2, 3}, {3, 2}, {4, 1}},
            {{0, 4}, {1, 3}, {2, 1}, {2, 3}, {4, 0}},
            {{0, 2}, {0, 4}, {1, 0}, {1, 2}, {1, 4}, {2, 0}, {2, 4}, {3, 4}},
            {{0, 3}, {2, 1}, {2, 4}, {3, 0}, {4, 1}, {4, 2}}}},
      };
  return table;
}

inline std::vector<QuasiRel> quo_atom_targets(int m) {
  std::vector<QuasiRel> targets;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) targets.push_back(quo_pair(m, i, j));
  return targets;
}

}  // namespace detail

// Look for a target_size-element generating set of Quo on m points: replay
// known sets, then seeded random restarts with single-slot hill climbing,
// then the same with a slightly larger target. The last resort is the full
// atom set, reported with met=false.
inline QuoSearchResult search_quo_generators(int m, int target_size,
                                             const QuoSearchOptions& opts = {}) {
  if (m < 2) throw input_error("search_quo_generators needs m >= 2");
  if (target_size < 1) throw input_error("target size must be positive");
  if (m == 4 && target_size == 4)
    throw input_error("no 4-element generating set of Quo on 4 points is known; use 5");
  std::vector<QuasiRel> targets = detail::quo_atom_targets(m);
  ClosureOptions copts;
  copts.targets = targets;
  copts.max_elems = opts.closure_cap;
  auto generates = [&](const std::vector<QuasiRel>& gens) {
    return close_with_witnesses(gens, QuasiRel::diagonal(m), copts).missing_targets.empty();
  };
  auto known = detail::known_quo_generators().find({m, target_size});
  if (known != detail::known_quo_generators().end()) {
    std::vector<QuasiRel> gens;
    for (const auto& pairs : known->second) {
      QuasiRel r(m, true);
      for (auto [a, b] : pairs) r.set(a, b);
      r.close();
      gens.push_back(r);
    }
    if (generates(gens)) return {std::move(gens), target_size, target_size, true};
  }
  auto domain = enumerate_quo(m, opts.enum_bound);
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<size_t> pick(0, domain.size() - 1);
  auto meets_diag = [&](const std::vector<QuasiRel>& g) {
    QuasiRel acc = g[0];
    for (size_t i = 1; i < g.size(); ++i) acc = meet(acc, g[i]);
    return acc == QuasiRel::diagonal(m);
  };
  struct Score {
    size_t found, size;
  };
  auto eval = [&](const std::vector<QuasiRel>& g) -> Score {
    LatticeSnapshot snap = close_with_witnesses(g, QuasiRel::diagonal(m), copts);
    return {targets.size() - snap.missing_targets.size(), snap.size()};
  };
  for (int k = target_size; k <= target_size + opts.extra_target_slack; ++k) {
    std::uniform_int_distribution<int> slot(0, k - 1);
    for (int restart = 0; restart < opts.restarts; ++restart) {
      std::vector<QuasiRel> cur;
      for (int guard = 0; guard < 1000; ++guard) {
        cur.clear();
        while (cur.size() < static_cast<size_t>(k)) cur.push_back(domain[pick(rng)]);
        if (meets_diag(cur)) break;
      }
      Score cs = eval(cur);
      for (int step = 0; step < opts.steps; ++step) {
        if (cs.found == targets.size())
          return {std::move(cur), target_size, k, k == target_size};
        std::vector<QuasiRel> cand = cur;
        cand[slot(rng)] = domain[pick(rng)];
        if (!meets_diag(cand)) continue;
        Score ns = eval(cand);
        if (ns.found > cs.found || (ns.found == cs.found && ns.size >= cs.size)) {
          cur = std::move(cand);
          cs = ns;
        }
      }
      if (cs.found == targets.size()) return {std::move(cur), target_size, k, k == target_size};
    }
  }
  QuoSearchResult fallback;
  fallback.gens = targets;
  fallback.target = target_size;
  fallback.achieved = static_cast<int>(targets.size());
  fallback.met = false;
  return fallback;
}

// A synthesized generating set E of Quleq(P) with full provenance: which
// entries came from strips (G), threads (H) and selectors (F), plus the data
// needed to rebuild witness certificates for every qum(a,b).
struct GenPlan {
  std::string mode;  // "A" general, "B" forest, "C" chain
  int bound = 0;
  bool search_target_met = true;
  PosetParams params;
  std::vector<QuasiRel> E;
  std::vector<std::string> provenance;
  StripPartition strips;
  ThreadCover threads;
  std::vector<std::vector<int>> sperner_sets;  // generator -> strip indices (B, C)
  std::vector<int> g_eidx;                     // per strip (A) or per Sperner set (B, C)
  std::vector<QuasiRel> h0;                    // abstract generators on component ids
  std::vector<std::vector<int>> h_eidx;        // [thread][h0 index] -> E index
  std::array<int, 2> selector_comp{-1, -1};
  std::array<int, 2> selector_nabla_eidx{-1, -1};
  std::array<std::vector<int>, 2> selector_f_eidx;         // E indices, nabla first
  std::array<std::vector<QuasiRel>, 2> selector_f_local;   // same order, local ids
  std::map<std::pair<int, int>, TermPtr> certificates;
};

struct SynthOptions {
  std::uint64_t seed = 1;
  TreeOptions tree;
  QuoSearchOptions search;
};

inline int bound_mode_a(int ncextr, int ncmp, int ncedge, int ncorr) {
  return ncextr * f_card(ncmp) + ncedge + ncorr;
}

inline int bound_mode_b(int ncextr, int ncmp, int ncedge, int ncorr) {
  return ncextr * f_card(ncmp) + lasp(static_cast<std::uint64_t>(ncedge)) + ncorr;
}

namespace detail {

inline std::vector<int> chain_sequence(const Poset& p) {
  std::vector<int> seq(p.n);
  std::iota(seq.begin(), seq.end(), 0);
  std::sort(seq.begin(), seq.end(), [&p](int a, int b) { return a != b && p.lt(a, b); });
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    if (!p.lt(seq[i], seq[i + 1])) throw input_error("poset is not a chain");
  return seq;
}

inline std::string subset_string(const std::vector<int>& xs) {
  std::string s = "{";
  for (size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s + "}";
}

}  // namespace detail

inline GenPlan synthesize(const Poset& p, std::string mode = "auto",
                          const SynthOptions& opts = {}) {
  ComponentInfo info = components(p);
  GenPlan plan;
  plan.params = compute_params(p, opts.tree);
  const PosetParams& pr = plan.params;
  bool is_single_chain = info.count() == 1 && info.chain_flag[0];
  if (mode == "auto") {
    if (is_single_chain)
      mode = "C";
    else if (pr.component_count >= 3)
      mode = pr.forest ? "B" : "A";
    else
      throw input_error("synthesis needs a chain or at least three components");
  }
  if (mode == "C" && !is_single_chain) throw input_error("mode C needs a single chain");
  if ((mode == "A" || mode == "B") && pr.component_count < 3)
    throw input_error("modes A and B need at least three components");
  if (mode == "B" && !pr.forest) throw input_error("mode B needs a forest");
  if (mode != "A" && mode != "B" && mode != "C") throw input_error("unknown mode " + mode);
  plan.mode = mode;

  auto add_elem = [&plan](const QuasiRel& r, const std::string& prov) {
    for (size_t i = 0; i < plan.E.size(); ++i)
      if (plan.E[i] == r) return static_cast<int>(i);
    plan.E.push_back(r);
    plan.provenance.push_back(prov);
    return static_cast<int>(plan.E.size() - 1);
  };

  if (mode == "C") {
    std::vector<int> seq = detail::chain_sequence(p);
    int ncedge = p.n - 1;
    plan.bound = lasp(static_cast<std::uint64_t>(ncedge));
    for (int j = 0; j < ncedge; ++j)
      plan.strips.push_back({{seq[j + 1], seq[j]}});
    if (ncedge > 0) {
      BooleanGenerators bg = boolean_generators(ncedge);
      plan.sperner_sets = bg.sets;
      for (int l = 0; l < bg.k; ++l) {
        std::vector<std::pair<int, int>> pairs;
        for (int j : bg.sets[l])
          pairs.insert(pairs.end(), plan.strips[j].begin(), plan.strips[j].end());
        plan.g_eidx.push_back(
            add_elem(qum_set(p, pairs), "G:sperner" + detail::subset_string(bg.sets[l])));
      }
    }
    return plan;
  }

  plan.strips = make_strips(info);
  plan.threads = make_threads(info, pr.max_extremals);
  int ncedge = pr.max_edges;
  if (mode == "A") {
    for (size_t j = 0; j < plan.strips.size(); ++j)
      plan.g_eidx.push_back(
          add_elem(qum_set(p, plan.strips[j]), "G:strip" + std::to_string(j)));
  } else if (ncedge > 0) {
    BooleanGenerators bg = boolean_generators(ncedge);
    plan.sperner_sets = bg.sets;
    for (int l = 0; l < bg.k; ++l) {
      std::vector<std::pair<int, int>> pairs;
      for (int j : bg.sets[l])
        pairs.insert(pairs.end(), plan.strips[j].begin(), plan.strips[j].end());
      plan.g_eidx.push_back(
          add_elem(qum_set(p, pairs), "G:sperner" + detail::subset_string(bg.sets[l])));
    }
  }

  QuoSearchOptions sopts = opts.search;
  sopts.seed = opts.seed;
  QuoSearchResult found = search_quo_generators(pr.component_count,
                                                f_card(pr.component_count), sopts);
  plan.search_target_met = found.met;
  plan.h0 = found.gens;
  plan.h_eidx.resize(plan.threads.size());
  for (size_t t = 0; t < plan.threads.size(); ++t)
    for (size_t g = 0; g < plan.h0.size(); ++g)
      plan.h_eidx[t].push_back(add_elem(
          phi_embed(p, plan.threads[t], plan.h0[g]),
          "H:thread" + std::to_string(t) + ":gen" + std::to_string(g)));

  std::array<std::vector<QuasiRel>, 2> witnesses{pr.selector_witness1, pr.selector_witness2};
  std::array<int, 2> tps{pr.tp1, pr.tp2};
  plan.selector_comp = {pr.selectors->first, pr.selectors->second};
  for (int s = 0; s < 2; ++s) {
    int c = plan.selector_comp[s];
    if (tps[s] == 0) continue;
    const auto& mem = info.members[c];
    std::string tag = "F" + std::to_string(s + 1);
    int nab = add_elem(nabla_plus(p, mem), tag + ":nabla");
    plan.selector_nabla_eidx[s] = nab;
    plan.selector_f_eidx[s].push_back(nab);
    plan.selector_f_local[s].push_back(tr_close(QuasiRel::full(static_cast<int>(mem.size()))));
    for (size_t w = 0; w < witnesses[s].size(); ++w) {
      QuasiRel global = p.order;
      for (auto [i, j] : witnesses[s][w].pairs()) global.set(mem[i], mem[j]);
      global.close();
      plan.selector_f_eidx[s].push_back(
          add_elem(global, tag + ":helper" + std::to_string(w)));
      plan.selector_f_local[s].push_back(witnesses[s][w]);
    }
  }
  plan.bound = mode == "A"
                   ? bound_mode_a(pr.max_extremals, pr.component_count, ncedge, pr.correction)
                   : bound_mode_b(pr.max_extremals, pr.component_count, ncedge, pr.correction);
  return plan;
}

namespace detail {

class CertBuilder {
 public:
  CertBuilder(const Poset& p, GenPlan& plan) : p_(p), plan_(plan), info_(components(p)) {}

  void run() {
    if (plan_.mode == "C") {
      run_chain();
    } else {
      build_abstract();
      build_selector_contexts();
      stage_edges();
      stage_reversed_intervals();
      check_component_nablas();
      stage_cross_extremal();
      stage_cross_general();
      stage_incomparable();
      stage_forward();
    }
    size_t expect = static_cast<size_t>(p_.n) * (p_.n - 1);
    if (plan_.certificates.size() != expect)
      throw verify_error("certificate table incomplete: " +
                         std::to_string(plan_.certificates.size()) + " of " +
                         std::to_string(expect));
  }

 private:
  const Poset& p_;
  GenPlan& plan_;
  ComponentInfo info_;
  LatticeSnapshot abstract_;
  std::map<std::pair<const LatTerm*, int>, TermPtr> thread_cache_;
  struct SelCtx {
    int comp = -1;
    Poset local;
    std::vector<int> mem;
    std::vector<int> local_of;
    LatticeSnapshot snap;
    size_t f_count = 0;
    std::vector<std::pair<int, int>> edges;  // global reversed pairs, generator order
    std::map<const LatTerm*, TermPtr> cache;
  };
  std::array<std::optional<SelCtx>, 2> sel_;

  const TermPtr& emit(int a, int b, TermPtr term, const char* stage) {
    QuasiRel got = eval_term<QuasiRel>(
        term, std::span<const QuasiRel>(plan_.E), {{"bot", p_.order}},
        [](const QuasiRel& x, const QuasiRel& y) { return meet(x, y); },
        [](const QuasiRel& x, const QuasiRel& y) { return join(x, y); });
    if (got != qum_pair(p_, a, b))
      throw verify_error("certificate mismatch for pair (" + std::to_string(a) + "," +
                         std::to_string(b) + ") at stage " + stage);
    return plan_.certificates[{a, b}] = std::move(term);
  }

  const TermPtr& cert(int a, int b) const {
    auto it = plan_.certificates.find({a, b});
    if (it == plan_.certificates.end())
      throw verify_error("certificate ordering bug: missing (" + std::to_string(a) + "," +
                         std::to_string(b) + ")");
    return it->second;
  }

  void run_chain() {
    std::vector<int> seq = chain_sequence(p_);
    int ncedge = p_.n - 1;
    std::vector<int> pos(p_.n);
    for (int i = 0; i < p_.n; ++i) pos[seq[i]] = i;
    auto atom_term = [&](int j) {
      std::vector<TermPtr> parts;
      for (size_t l = 0; l < plan_.sperner_sets.size(); ++l)
        if (std::count(plan_.sperner_sets[l].begin(), plan_.sperner_sets[l].end(), j))
          parts.push_back(make_var(plan_.g_eidx[l]));
      return make_meet(std::move(parts));
    };
    TermPtr mu_term;
    if (ncedge >= 2) {
      std::vector<TermPtr> all;
      for (int l : plan_.g_eidx) all.push_back(make_var(l));
      mu_term = make_meet(std::move(all));
    } else {
      mu_term = make_const("bot");
    }
    for (int i = 0; i < p_.n; ++i)
      for (int j = 0; j < p_.n; ++j) {
        if (i == j) continue;
        if (pos[i] < pos[j]) {
          emit(i, j, mu_term, "chain-forward");
        } else {
          std::vector<TermPtr> atoms;
          for (int e = pos[j]; e < pos[i]; ++e) atoms.push_back(atom_term(e));
          emit(i, j, make_join(std::move(atoms)), "chain-reversed");
        }
      }
  }

  void build_abstract() {
    int m = info_.count();
    ClosureOptions copts;
    copts.targets = quo_atom_targets(m);
    copts.max_elems =
        m < static_cast<int>(quo_size_table().size()) ? quo_size_table()[m] + 2 : 5'000'000;
    abstract_ = close_with_witnesses(plan_.h0, QuasiRel::diagonal(m), copts);
    if (!abstract_.missing_targets.empty())
      throw verify_error("thread generators do not generate the component quasiorder lattice");
  }

  TermPtr thread_term(int t, int c1, int c2) {
    int idx = abstract_.find(quo_pair(info_.count(), c1, c2));
    if (idx < 0) throw verify_error("abstract witness missing");
    return remap_thread(abstract_.witnesses[idx], t);
  }

  TermPtr remap_thread(const TermPtr& u, int t) {
    auto key = std::make_pair(u.get(), t);
    auto hit = thread_cache_.find(key);
    if (hit != thread_cache_.end()) return hit->second;
    TermPtr out;
    switch (u->kind) {
      case LatTerm::Kind::Var:
        out = make_var(plan_.h_eidx[t][u->var]);
        break;
      case LatTerm::Kind::Const:
        out = u;
        break;
      case LatTerm::Kind::Meet:
      case LatTerm::Kind::Join: {
        std::vector<TermPtr> kids;
        for (const auto& k : u->kids) kids.push_back(remap_thread(k, t));
        out = u->kind == LatTerm::Kind::Meet ? make_meet(std::move(kids))
                                             : make_join(std::move(kids));
        break;
      }
    }
    return thread_cache_[key] = out;
  }

  void build_selector_contexts() {
    for (int s = 0; s < 2; ++s) {
      int c = plan_.selector_comp[s];
      if (info_.members[c].size() == 1) continue;
      SelCtx ctx;
      ctx.comp = c;
      auto [local, mem] = component_poset(p_, info_, c);
      ctx.local = std::move(local);
      ctx.mem = std::move(mem);
      ctx.local_of.assign(p_.n, -1);
      for (size_t i = 0; i < ctx.mem.size(); ++i) ctx.local_of[ctx.mem[i]] = static_cast<int>(i);
      std::vector<QuasiRel> gens = plan_.selector_f_local[s];
      ctx.f_count = gens.size();
      for (auto [x, y] : ctx.local.covers) {
        gens.push_back(qum_pair(ctx.local, y, x));
        ctx.edges.emplace_back(ctx.mem[y], ctx.mem[x]);
      }
      ClosureOptions copts;
      copts.targets = all_pair_qums(ctx.local);
      copts.max_elems = 300000;
      copts.stop_when_targets_found = false;
      ctx.snap = close_with_witnesses(gens, ctx.local.order, copts);
      if (!ctx.snap.missing_targets.empty())
        throw verify_error("selector generators do not generate their filter");
      sel_[s] = std::move(ctx);
    }
  }

  TermPtr selector_term(int s, int gx, int gy) {
    SelCtx& ctx = *sel_[s];
    QuasiRel target = qum_pair(ctx.local, ctx.local_of[gx], ctx.local_of[gy]);
    int idx = ctx.snap.find(target);
    if (idx < 0) throw verify_error("selector witness missing");
    return remap_selector(ctx.snap.witnesses[idx], s);
  }

  TermPtr remap_selector(const TermPtr& u, int s) {
    SelCtx& ctx = *sel_[s];
    auto hit = ctx.cache.find(u.get());
    if (hit != ctx.cache.end()) return hit->second;
    TermPtr out;
    switch (u->kind) {
      case LatTerm::Kind::Var:
        if (u->var < static_cast<int>(ctx.f_count)) {
          out = make_var(plan_.selector_f_eidx[s][u->var]);
        } else {
          auto [y, x] = ctx.edges[u->var - ctx.f_count];
          out = cert(y, x);
        }
        break;
      case LatTerm::Kind::Const:
        out = u;
        break;
      case LatTerm::Kind::Meet:
      case LatTerm::Kind::Join: {
        std::vector<TermPtr> kids;
        for (const auto& k : u->kids) kids.push_back(remap_selector(k, s));
        out = u->kind == LatTerm::Kind::Meet ? make_meet(std::move(kids))
                                             : make_join(std::move(kids));
        break;
      }
    }
    return ctx.cache[u.get()] = out;
  }

  int strip_of(int y, int x) const {
    for (size_t j = 0; j < plan_.strips.size(); ++j)
      for (auto [v, u] : plan_.strips[j])
        if (v == y && u == x) return static_cast<int>(j);
    throw verify_error("edge missing from strips");
  }

  TermPtr strip_term(int j) {
    if (plan_.mode == "A") return make_var(plan_.g_eidx[j]);
    std::vector<TermPtr> parts;
    for (size_t l = 0; l < plan_.sperner_sets.size(); ++l)
      if (std::count(plan_.sperner_sets[l].begin(), plan_.sperner_sets[l].end(), j))
        parts.push_back(make_var(plan_.g_eidx[l]));
    return make_meet(std::move(parts));
  }

  int extr_pos(int e) const {
    const auto& ex = info_.extremal[info_.comp_of[e]];
    auto it = std::find(ex.begin(), ex.end(), e);
    if (it == ex.end()) throw verify_error("element is not extremal");
    return static_cast<int>(it - ex.begin());
  }

  // Meet over both selectors of joins hopping through their extremals on the
  // threads of e1 and e2; exact for extremal e1, e2 off the common threads.
  TermPtr bridge(int e1, int e2) {
    int t1 = extr_pos(e1), t2 = extr_pos(e2);
    std::vector<TermPtr> factors;
    for (int s = 0; s < 2; ++s) {
      int cs = plan_.selector_comp[s];
      int u = plan_.threads[t1][cs];
      int v = plan_.threads[t2][cs];
      std::vector<TermPtr> joinands;
      if (e1 != u) joinands.push_back(thread_term(t1, info_.comp_of[e1], cs));
      if (u != v && qum_pair(p_, u, v) != p_.order)
        joinands.push_back(selector_term(s, u, v));
      if (v != e2) joinands.push_back(thread_term(t2, cs, info_.comp_of[e2]));
      factors.push_back(make_join(std::move(joinands)));
    }
    return make_meet(std::move(factors));
  }

  bool is_selector(int c, int* which = nullptr) const {
    for (int s = 0; s < 2; ++s)
      if (plan_.selector_comp[s] == c) {
        if (which) *which = s;
        return true;
      }
    return false;
  }

  void stage_edges() {
    std::vector<int> order(info_.count());
    std::iota(order.begin(), order.end(), 0);
    std::stable_partition(order.begin(), order.end(),
                          [this](int c) { return is_selector(c); });
    for (int c : order)
      for (auto [x, y] : info_.edges[c]) {
        TermPtr gpart = strip_term(strip_of(y, x));
        int s;
        if (is_selector(c, &s)) {
          emit(y, x, make_meet({gpart, make_var(plan_.selector_nabla_eidx[s])}),
               "selector-edge");
        } else {
          int vstar = first_above(y, info_.maximal[c]);
          int ustar = first_below(x, info_.minimal[c]);
          emit(y, x, make_meet({gpart, bridge(vstar, ustar)}), "edge");
        }
      }
  }

  int first_above(int x, const std::vector<int>& maxima) const {
    for (int m : maxima)
      if (p_.leq(x, m)) return m;
    throw verify_error("no maximal element above");
  }

  int first_below(int x, const std::vector<int>& minima) const {
    for (int m : minima)
      if (p_.leq(m, x)) return m;
    throw verify_error("no minimal element below");
  }

  void stage_reversed_intervals() {
    for (int a = 0; a < p_.n; ++a)
      for (int b = 0; b < p_.n; ++b) {
        if (a == b || !p_.lt(a, b)) continue;
        if (plan_.certificates.count({b, a})) continue;
        std::vector<TermPtr> parts;
        for (auto [x, y] : info_.edges[info_.comp_of[a]])
          if (p_.leq(a, x) && p_.leq(y, b)) parts.push_back(cert(y, x));
        emit(b, a, make_join(std::move(parts)), "reversed-interval");
      }
  }

  void check_component_nablas() {
    for (int c = 0; c < info_.count(); ++c) {
      if (info_.members[c].size() == 1) continue;
      std::vector<TermPtr> parts;
      for (auto [x, y] : info_.edges[c]) parts.push_back(cert(y, x));
      TermPtr t = make_join(std::move(parts));
      QuasiRel got = eval_term<QuasiRel>(
          t, std::span<const QuasiRel>(plan_.E), {{"bot", p_.order}},
          [](const QuasiRel& x, const QuasiRel& y) { return meet(x, y); },
          [](const QuasiRel& x, const QuasiRel& y) { return join(x, y); });
      if (got != nabla_plus(p_, info_.members[c]))
        throw verify_error("component full-relation join mismatch");
    }
  }

  void stage_cross_extremal() {
    for (int c1 = 0; c1 < info_.count(); ++c1)
      for (int c2 = 0; c2 < info_.count(); ++c2) {
        if (c1 == c2) continue;
        for (int e1 : info_.extremal[c1])
          for (int e2 : info_.extremal[c2]) {
            int p1 = extr_pos(e1), p2 = extr_pos(e2);
            int common = -1;
            for (size_t i = 0; i < plan_.threads.size() && common < 0; ++i)
              if (static_cast<int>(i) % info_.extremal[c1].size() == static_cast<size_t>(p1) &&
                  static_cast<int>(i) % info_.extremal[c2].size() == static_cast<size_t>(p2))
                common = static_cast<int>(i);
            if (common >= 0)
              emit(e1, e2, thread_term(common, c1, c2), "cross-thread");
            else
              emit(e1, e2, bridge(e1, e2), "cross-bridge");
          }
      }
  }

  void stage_cross_general() {
    for (int a = 0; a < p_.n; ++a)
      for (int b = 0; b < p_.n; ++b) {
        if (a == b || info_.comp_of[a] == info_.comp_of[b]) continue;
        if (plan_.certificates.count({a, b})) continue;
        int ca = info_.comp_of[a], cb = info_.comp_of[b];
        int astar = first_above(a, info_.maximal[ca]);
        int alow = first_below(a, info_.minimal[ca]);
        int bstar = first_above(b, info_.maximal[cb]);
        int blow = first_below(b, info_.minimal[cb]);
        std::vector<TermPtr> beta{cert(astar, bstar)};
        if (bstar != b) beta.push_back(cert(bstar, b));
        std::vector<TermPtr> gamma;
        if (a != alow) gamma.push_back(cert(a, alow));
        gamma.push_back(cert(alow, blow));
        emit(a, b, make_meet({make_join(std::move(beta)), make_join(std::move(gamma))}),
             "cross-general");
      }
  }

  void stage_incomparable() {
    for (int a = 0; a < p_.n; ++a)
      for (int b = 0; b < p_.n; ++b) {
        if (a == b || info_.comp_of[a] != info_.comp_of[b]) continue;
        if (p_.leq(a, b) || p_.leq(b, a)) continue;
        int c = info_.comp_of[a], s;
        if (is_selector(c, &s)) {
          emit(a, b, selector_term(s, a, b), "selector-incomparable");
          continue;
        }
        std::vector<TermPtr> factors;
        for (int i = 0; i < 2; ++i) {
          int ci = info_.members[plan_.selector_comp[i]][0];
          factors.push_back(make_join({cert(a, ci), cert(ci, b)}));
        }
        emit(a, b, make_meet(std::move(factors)), "incomparable");
      }
  }

  void stage_forward() {
    TermPtr mu_term;
    for (int a = 0; a < p_.n; ++a)
      for (int b = 0; b < p_.n; ++b) {
        if (a == b || !p_.lt(a, b)) continue;
        if (!mu_term) {
          int c0 = info_.members[0][0], c1 = info_.members[1][0];
          mu_term = make_meet({cert(c0, c1), cert(c1, c0)});
        }
        emit(a, b, mu_term, "forward");
      }
  }
};

}  // namespace detail

// Fill plan.certificates with one verified witness term per ordered pair.
inline void build_certificates(const Poset& p, GenPlan& plan) {
  detail::CertBuilder(p, plan).run();
}

// Closure of the plan's generating set, for whole-lattice verification.
inline LatticeSnapshot plan_closure(const Poset& p, const GenPlan& plan, size_t max_elems) {
  ClosureOptions opts;
  opts.max_elems = max_elems;
  return close_with_witnesses(plan.E, p.order, opts);
}

// Whether the closure of E reaches every pair quasiorder qum(a,b); since each
// filter element is a join of the pair quasiorders below it, this already
// makes the closure the whole filter.
inline bool plan_generates(const Poset& p, const GenPlan& plan, size_t max_elems = 5'000'000) {
  ClosureOptions opts;
  opts.targets = all_pair_qums(p);
  opts.max_elems = max_elems;
  return close_with_witnesses(plan.E, p.order, opts).missing_targets.empty();
}

struct CorollaryRow {
  std::string family;
  std::string stated;   // the published closed-form bound
  std::string derived;  // the same bound from engine-computed parameters
  bool flagged = false;
};

// Sample-family bounds: antichains, chain sums (with a long-chain row), and
// Y-poset sums, each with the two-singleton variant. Stated and derived
// columns disagree exactly where the published parameter values do not match
// the defining arithmetic; such rows are flagged rather than reconciled.
inline std::vector<CorollaryRow> corollary_rows(
    const std::string& long_chain_len = "100000000000000000000") {
  std::vector<CorollaryRow> rows;
  auto add = [&rows](std::string family, int stated, int derived) {
    rows.push_back({std::move(family), std::to_string(stated), std::to_string(derived),
                    stated != derived});
  };
  add("antichain(n>=5)", 4, bound_mode_b(1, 5, 0, 0));
  int l2 = lasp(2);
  add("chains(len 2)", 10 + l2, bound_mode_b(2, 5, 2, 1 + 1));
  add("chains(len 2)+A2", 8 + l2, bound_mode_b(2, 7, 2, 0));
  int lbig = lasp_decimal(long_chain_len);
  add("chains(len " + long_chain_len + ")", 10 + lbig, 10 + lbig);
  add("chains(len " + long_chain_len + ")+A2", 8 + lbig, 8 + lbig);
  int ntp_y = tree_parameter(y_poset()).value;
  add("ysum", bound_mode_b(3, 5, 3, 3 + 3), bound_mode_b(3, 5, 3, ntp_y + ntp_y));
  add("ysum+A2", bound_mode_b(3, 7, 3, 0), bound_mode_b(3, 7, 3, 0));
  return rows;
}

struct FigureReport {
  PosetParams params;
  int f_value = 0;
  int lasp_value = 0;
  int stated = 0;
  int mode_a = 0;
  int mode_b = 0;
  bool flagged = false;
};

inline FigureReport figure_report(int which) {
  if (which != 1 && which != 2) throw input_error("figure_report takes 1 or 2");
  Poset p = which == 1 ? figure1() : figure2();
  FigureReport rep;
  rep.params = compute_params(p);
  rep.f_value = f_card(rep.params.component_count);
  rep.lasp_value = lasp(static_cast<std::uint64_t>(rep.params.max_edges));
  rep.stated = which == 1 ? 23 : 12;
  rep.mode_a = bound_mode_a(rep.params.max_extremals, rep.params.component_count,
                            rep.params.max_edges, rep.params.correction);
  rep.mode_b = bound_mode_b(rep.params.max_extremals, rep.params.component_count,
                            rep.params.max_edges, rep.params.correction);
  rep.flagged = rep.params.forest && rep.stated != rep.mode_b;
  return rep;
}

}  // namespace quleq

#endif
