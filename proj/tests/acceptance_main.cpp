#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "quleq/authsim.hpp"
#include "quleq/eqslat.hpp"
#include "property_suites.hpp"

using namespace quleq;

namespace {

using clk = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  bool documented = false;  // an expected, recorded failure
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

// Exhaustive preorder count over all off-diagonal bitmasks, independent of
// the library's enumeration.
std::uint64_t count_preorders(int n) {
  std::vector<std::pair<int, int>> off;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) off.push_back({i, j});
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (1ull << off.size()); ++mask) {
    unsigned rows[8] = {};
    for (int i = 0; i < n; ++i) rows[i] = 1u << i;
    for (size_t b = 0; b < off.size(); ++b)
      if (mask >> b & 1) rows[off[b].first] |= 1u << off[b].second;
    bool trans = true;
    for (int i = 0; i < n && trans; ++i)
      for (int k = 0; k < n && trans; ++k)
        if (rows[i] >> k & 1)
          if (rows[k] & ~rows[i]) trans = false;
    if (trans) ++count;
  }
  return count;
}

Outcome criterion_sizes() {
  auto t0 = clk::now();
  for (int n = 3; n <= 5; ++n) {
    std::uint64_t oracle = count_preorders(n);
    if (oracle != quo_size_table()[n])
      return {false, false, fmt("oracle disagrees at n=%d: %llu", n, (unsigned long long)oracle)};
    if (enumerate_quo(n).size() != oracle)
      return {false, false, fmt("enumeration disagrees at n=%d", n)};
  }
  double el = std::chrono::duration<double>(clk::now() - t0).count();
  if (el >= 10.0) return {false, false, fmt("took %.1fs, limit 10s", el)};
  auto t1 = clk::now();
  size_t census = enumerate_quo(7, 7).size();
  double el7 = std::chrono::duration<double>(clk::now() - t1).count();
  if (census != 9535241)
    return {false, false, fmt("7-point census came out %zu", census)};
  if (el7 >= 600.0) return {false, false, fmt("7-point census took %.0fs, limit 600s", el7)};
  return {true, false,
          fmt("29/355/6942 via oracle and enumeration in %.1fs; 7-point census "
              "9535241 in %.0fs", el, el7)};
}

bool subset_generates(const Poset& p, const std::vector<QuasiRel>& subset, size_t want) {
  ClosureOptions opts;
  opts.max_elems = want + 8;
  return close_with_witnesses(subset, p.order, opts).size() == want;
}

Outcome criterion_chains() {
  for (int n = 1; n <= 10; ++n) {
    auto t0 = clk::now();
    Poset p = chain(n);
    size_t want = size_t{1} << n;
    if (enumerate_quleq(p, want + 8).size() != want)
      return {false, false, fmt("filter of the %d-edge chain is not 2^%d", n, n)};
    GenPlan plan = synthesize(p);
    if (plan.E.size() != static_cast<size_t>(lasp(n)))
      return {false, false, fmt("plan size %zu at n=%d, expected lasp", plan.E.size(), n)};
    LatticeSnapshot snap = plan_closure(p, plan, want + 8);
    if (!snap.complete || snap.size() != want)
      return {false, false, fmt("closure misses the filter at n=%d", n)};
    double el = std::chrono::duration<double>(clk::now() - t0).count();
    if (el >= 5.0) return {false, false, fmt("n=%d took %.1fs, limit 5s", n, el)};
  }
  auto t0 = clk::now();
  for (int n = 1; n <= 3; ++n) {
    Poset p = chain(n);
    std::vector<QuasiRel> filter = enumerate_quleq(p, 1 << n);
    size_t want = size_t{1} << n;
    int k = lasp(n) - 1;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<QuasiRel> subset;
      for (int i : idx) subset.push_back(filter[i]);
      if (subset_generates(p, subset, want))
        return {false, false, fmt("a %d-element set generates the %d-edge chain filter", k, n)};
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == static_cast<int>(filter.size()) - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  double el = std::chrono::duration<double>(clk::now() - t0).count();
  if (el >= 30.0) return {false, false, fmt("minimality sweep took %.1fs, limit 30s", el)};
  return {true, false,
          "n=1..10: filter 2^n, plan size lasp(n), closure complete; no smaller set "
          "generates for n<=3"};
}

Outcome criterion_corollary() {
  auto t0 = clk::now();
  std::vector<CorollaryRow> rows = corollary_rows();
  std::vector<std::string> stated = {"4", "12", "10", "80", "78", "21", "15"};
  std::vector<std::string> derived = {"4", "12", "10", "80", "78", "19", "15"};
  if (rows.size() != stated.size()) return {false, false, "row count changed"};
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].stated != stated[i] || rows[i].derived != derived[i])
      return {false, false, fmt("row %zu (%s): stated %s derived %s", i,
                                rows[i].family.c_str(), rows[i].stated.c_str(),
                                rows[i].derived.c_str())};
    if (rows[i].flagged != (i == 5))
      return {false, false, fmt("row %zu flag state wrong", i)};
  }
  double el = std::chrono::duration<double>(clk::now() - t0).count();
  if (el >= 1.0) return {false, false, fmt("took %.2fs, limit 1s", el)};
  return {true, false,
          "stated column 4/12/10/80/78/21/15; ysum alone is flagged (derived 19)"};
}

Outcome criterion_closures() {
  auto t0 = clk::now();
  Poset a5 = antichain(5);
  GenPlan p5 = synthesize(a5);
  LatticeSnapshot s5 = plan_closure(a5, p5, 7000);
  double el5 = std::chrono::duration<double>(clk::now() - t0).count();
  if (p5.E.size() != 4 || !s5.complete || s5.size() != 6942)
    return {false, false, fmt("antichain(5): |E|=%zu closure=%zu", p5.E.size(), s5.size())};
  if (el5 >= 60.0) return {false, false, fmt("antichain(5) took %.1fs, limit 60s", el5)};

  Poset v6 = cardinal_sum({chain(1), chain(1), antichain(2)});
  std::vector<QuasiRel> f6 = enumerate_quleq(v6, 100000);
  GenPlan g6 = synthesize(v6);
  LatticeSnapshot s6 = plan_closure(v6, g6, f6.size() + 8);
  if (!s6.complete || s6.size() != f6.size())
    return {false, false, fmt("chain sum variant: closure %zu vs filter %zu", s6.size(),
                              f6.size())};

  Poset v8 = cardinal_sum({chain(2), chain(2), antichain(2)});
  bool gated = false;
  try {
    enumerate_quleq(v8, 100000);
  } catch (const budget_error&) {
    gated = true;
  }
  if (!gated) return {false, false, "8-point variant unexpectedly fit the element gate"};
  GenPlan g8 = synthesize(v8);
  if (!plan_generates(v8, g8))
    return {false, false, "8-point variant plan misses a pair generator"};
  return {true, false,
          fmt("antichain(5) closes to 6942 in %.1fs; 6-point variant closes to %zu; "
              "8-point variant exceeds the 1e5 gate, generation checked by targets",
              el5, f6.size())};
}

Outcome criterion_certificates() {
  auto t0 = clk::now();
  Poset ys = sum_of_copies(y_poset(), 5);
  GenPlan plan = synthesize(ys);
  build_certificates(ys, plan);
  verify_certificates(ys, plan);
  double el = std::chrono::duration<double>(clk::now() - t0).count();
  if (plan.certificates.size() != 380)
    return {false, false, fmt("%zu certificates, expected 380", plan.certificates.size())};
  if (plan.E.size() > 21)
    return {false, false, fmt("|E|=%zu exceeds 21", plan.E.size())};
  if (el >= 120.0) return {false, false, fmt("took %.1fs, limit 120s", el)};
  return {true, false,
          fmt("380 certificates bit-exact over |E|=%zu generators in %.1fs", plan.E.size(), el)};
}

Outcome criterion_figures() {
  FigureReport r1 = figure_report(1);
  FigureReport r2 = figure_report(2);
  if (r1.stated != 23 || r1.mode_a != 23 || r1.mode_b != 22 || !r1.flagged)
    return {false, false, fmt("first figure: %d/%d/%d flag=%d", r1.stated, r1.mode_a,
                              r1.mode_b, r1.flagged ? 1 : 0)};
  if (r2.stated != 12 || r2.mode_a != 12 || r2.mode_b != 12 || r2.flagged)
    return {false, false, fmt("second figure: %d/%d/%d flag=%d", r2.stated, r2.mode_a,
                              r2.mode_b, r2.flagged ? 1 : 0)};
  return {true, false,
          "first figure 23 stated vs 22 refined, flagged; second figure 12 exact"};
}

Outcome criterion_boolean() {
  auto t0 = clk::now();
  for (int m = 1; m <= 1000; ++m) {
    BooleanGenerators bg = boolean_generators(m);
    int expect_k = m == 1 ? 1 : lasp(static_cast<std::uint64_t>(m));
    if (bg.k != expect_k) return {false, false, fmt("k mismatch at m=%d", m)};
    int words = (m + 63) / 64;
    std::vector<std::vector<std::uint64_t>> sets(bg.k, std::vector<std::uint64_t>(words, 0));
    for (int j = 0; j < bg.k; ++j)
      for (int atom : bg.sets[j]) sets[j][atom / 64] |= 1ull << (atom % 64);
    std::vector<std::uint64_t> ones(words, ~0ull);
    if (m % 64) ones[words - 1] = (1ull << (m % 64)) - 1;
    for (int i = 0; i < m; ++i) {
      std::vector<std::uint64_t> t = ones;
      for (int j = 0; j < bg.k; ++j) {
        bool has = std::binary_search(bg.blocks[i].begin(), bg.blocks[i].end(), j);
        for (int w = 0; w < words; ++w) t[w] &= has ? sets[j][w] : ~sets[j][w];
      }
      std::vector<std::uint64_t> only(words, 0);
      only[i / 64] = 1ull << (i % 64);
      if (t != only) return {false, false, fmt("recovery fails at m=%d atom %d", m, i)};
    }
  }
  std::string hundred = "1" + std::string(100, '0');
  bool lasps = lasp(1) == 1 && lasp(2) == 2 && lasp(3) == 3 && lasp(4) == 4 &&
               lasp(1000) == 13 && lasp_decimal("100000000000000000000") == 70 &&
               lasp_decimal(hundred) == 337;
  if (!lasps) return {false, false, "a lasp value is off"};
  double el = std::chrono::duration<double>(clk::now() - t0).count();
  if (el >= 5.0) return {false, false, fmt("took %.1fs, limit 5s", el)};
  return {true, false,
          fmt("singleton recovery holds for every m<=1000; lasp(1000)=13, "
              "lasp(1e20)=70, lasp(1e100)=337 in %.1fs", el)};
}

Outcome criterion_tree() {
  if (tree_parameter(chain(0)).value != 0)
    return {false, false, "singleton parameter is not 0"};
  for (int n = 1; n <= 6; ++n)
    if (tree_parameter(chain(n)).value != 1)
      return {false, false, fmt("%d-edge chain parameter is not 1", n)};
  Poset y = y_poset();
  TreeParam tp = tree_parameter(y);
  std::vector<QuasiRel> gens;
  for (auto [u, v] : y.covers) gens.push_back(qum_pair(y, v, u));
  for (const QuasiRel& w : tp.witness) gens.push_back(w);
  ClosureOptions opts;
  opts.targets = all_pair_qums(y);
  bool witness_ok = close_with_witnesses(gens, y.order, opts).missing_targets.empty();
  if (tp.value == 3)
    return {true, false, "singletons 0, chains 1, Y-tree 3"};
  if (tp.value == 2 && tp.witness.size() == 1 && witness_ok)
    return {false, true,
            "singletons 0 and chains 1 hold, but the Y-tree parameter is 2 (single "
            "helper re-verified here; exhaustive search finds no need for a second), "
            "while the recorded expectation is 3; see README"};
  return {false, false, fmt("Y-tree parameter came out %d", tp.value)};
}

Outcome criterion_reduction() {
  auto t0 = clk::now();
  std::vector<SmallLattice> lattices = {chain_lattice(2), chain_lattice(3), n5_lattice(),
                                        m3_lattice()};
  long systems = 0, checks = 0;
  for (int m = 0; m <= 4; ++m) {
    std::vector<std::array<int, 3>> triples;
    for (int a = 1; a <= m; ++a)
      for (int b = a + 1; b <= m; ++b)
        for (int c = b + 1; c <= m; ++c) triples.push_back({a, b, c});
    std::vector<std::array<int, 2>> duos;
    for (int a = 1; a <= m; ++a)
      for (int b = a + 1; b <= m; ++b) duos.push_back({a, b});
    std::vector<std::vector<std::array<int, 3>>> pos_choices = {{}};
    for (size_t i = 0; i < triples.size(); ++i) {
      pos_choices.push_back({triples[i]});
      for (size_t j = i + 1; j < triples.size(); ++j)
        pos_choices.push_back({triples[i], triples[j]});
    }
    std::vector<std::vector<std::array<int, 2>>> neg_choices = {{}};
    for (size_t i = 0; i < duos.size(); ++i) {
      neg_choices.push_back({duos[i]});
      for (size_t j = i + 1; j < duos.size(); ++j) neg_choices.push_back({duos[i], duos[j]});
    }
    for (const auto& pos : pos_choices)
      for (const auto& neg : neg_choices) {
        CnfHK h = make_cnfhk(m, pos, neg);
        auto sat = sat_brute(h);
        ++systems;
        for (const SmallLattice& L : lattices)
          for (auto [a0, a1] : L.covers()) {
            EqSystem sys = reduce_cnfhk(h, L, a0, a1);
            auto sol = solve_brute(L, sys);
            if (sol.has_value() != sat.has_value())
              return {false, false,
                      fmt("m=%d over %s cover (%s,%s): solvable=%d sat=%d", m,
                          L.name.c_str(), L.labels[a0].c_str(), L.labels[a1].c_str(),
                          sol.has_value() ? 1 : 0, sat.has_value() ? 1 : 0)};
            if (sol && !check_solution(L, sys, *sol))
              return {false, false, "solver returned a bad assignment"};
            if (sat && !check_solution(L, sys, lift_witness(h, *sat, a0, a1)))
              return {false, false, "lifted witness fails the reduced system"};
            ++checks;
          }
      }
  }
  double el = std::chrono::duration<double>(clk::now() - t0).count();
  if (el >= 120.0) return {false, false, fmt("took %.1fs, limit 120s", el)};
  return {true, false,
          fmt("%ld systems, %ld lattice-cover checks, solvability always matches "
              "satisfiability in %.1fs", systems, checks, el)};
}

Outcome criterion_sessions() {
  auto t0 = clk::now();
  Poset p = cardinal_sum({chain(2), chain(1), chain(1)});
  GenPlan plan = synthesize(p);
  SharedKey key = keygen(p, plan, 3, 424242);
  for (std::uint64_t s = 1; s <= 100; ++s) {
    Transcript genuine = run_loopback_session(key, fmt("acc-g-%llu", (unsigned long long)s), s);
    if (!genuine.accepted || genuine.lines.size() != 4)
      return {false, false, fmt("genuine session %llu rejected", (unsigned long long)s)};
    int hit = static_cast<int>(s % key.cfg.b);
    Transcript tam =
        run_loopback_session(key, fmt("acc-t-%llu", (unsigned long long)s), s, nullptr, hit);
    if (tam.accepted)
      return {false, false, fmt("tampered session %llu accepted", (unsigned long long)s)};
    Response stale = respond(key, make_challenge(key, s + 10007));
    Transcript rep =
        run_loopback_session(key, fmt("acc-r-%llu", (unsigned long long)s), s, &stale);
    if (rep.accepted)
      return {false, false, fmt("replayed session %llu accepted", (unsigned long long)s)};
  }
  Challenge ch = make_challenge(key, 31337);
  std::vector<std::uint8_t> ks = vernam_key(respond(key, ch));
  std::mt19937_64 rng(5);
  std::vector<std::uint8_t> msg(ks.size());
  for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
  if (vernam_xor(ks, vernam_xor(ks, msg)) != msg)
    return {false, false, "xor with the keystream is not an involution"};
  std::vector<std::uint8_t> zeros(ks.size(), 0);
  if (vernam_xor(ks, zeros) != ks)
    return {false, false, "zero message does not return the keystream"};
  double el = std::chrono::duration<double>(clk::now() - t0).count();
  if (el >= 10.0) return {false, false, fmt("took %.1fs, limit 10s", el)};
  return {true, false,
          fmt("100 genuine sessions accepted, 100 tampered and 100 replayed rejected; "
              "keystream laws hold in %.1fs", el)};
}

Outcome criterion_properties() {
  struct Named {
    const char* name;
    propsuite::SuiteResult r;
  };
  std::vector<Named> suites = {
      {"lattice laws", propsuite::lattice_laws(1500, 7701)},
      {"closed form", propsuite::qum_closed_form(1500, 7702)},
      {"independence", propsuite::independence(1200, 7703)},
      {"convexity", propsuite::convexity()},
      {"embedding", propsuite::phi_morphism(1200, 7704)},
      {"edge independence", propsuite::edge_independence(1200, 7705)},
  };
  std::string counts;
  for (const Named& s : suites) {
    if (s.r.cases < 1000)
      return {false, false, fmt("%s ran only %ld cases", s.name, s.r.cases)};
    if (s.r.failures != 0)
      return {false, false, fmt("%s failed %ld of %ld cases", s.name, s.r.failures, s.r.cases)};
    counts += (counts.empty() ? "" : "/") + std::to_string(s.r.cases);
  }
  return {true, false, "six suites all clean with " + counts + " cases"};
}

}  // namespace

int main() {
  struct Row {
    const char* title;
    std::function<Outcome()> run;
  };
  std::vector<Row> rows = {
      {"whole-lattice counts", criterion_sizes},
      {"chain filters", criterion_chains},
      {"closed-form bounds", criterion_corollary},
      {"closure spot checks", criterion_closures},
      {"certified generators", criterion_certificates},
      {"figure regressions", criterion_figures},
      {"Boolean generator families", criterion_boolean},
      {"tree parameters", criterion_tree},
      {"equation reduction", criterion_reduction},
      {"authenticated sessions", criterion_sessions},
      {"property suites", criterion_properties},
  };
  int unexpected = 0, documented = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    auto t0 = clk::now();
    Outcome out;
    try {
      out = rows[i].run();
    } catch (const std::exception& e) {
      out = {false, false, std::string("exception: ") + e.what()};
    }
    double el = std::chrono::duration<double>(clk::now() - t0).count();
    const char* verdict = out.pass ? "PASS" : out.documented ? "FAIL (documented)" : "FAIL";
    std::printf("[%2zu] %-17s %s: %s (%.1fs)\n", i + 1, verdict, rows[i].title,
                out.detail.c_str(), el);
    std::fflush(stdout);
    if (!out.pass && out.documented) ++documented;
    if (!out.pass && !out.documented) ++unexpected;
  }
  std::printf("acceptance: %d passed, %d documented failures, %d unexpected failures\n",
              static_cast<int>(rows.size()) - documented - unexpected, documented, unexpected);
  return unexpected ? 1 : 0;
}
