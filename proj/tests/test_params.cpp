#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "quleq/params.hpp"

using namespace quleq;

namespace {

// Check a helper set directly: reversed-edge qums plus the helpers must reach
// every pair qum of T under meets and joins.
bool helpers_generate(const Poset& t, const std::vector<QuasiRel>& helpers) {
  std::vector<QuasiRel> gens;
  for (auto [x, y] : t.covers) gens.push_back(qum_pair(t, y, x));
  gens.insert(gens.end(), helpers.begin(), helpers.end());
  ClosureOptions opts;
  opts.targets = all_pair_qums(t);
  return close_with_witnesses(gens, t.order, opts).missing_targets.empty();
}

}  // namespace

TEST_CASE("tree parameter fiat values") {
  CHECK(tree_parameter(antichain(1)).value == 0);
  CHECK(tree_parameter(antichain(1)).witness.empty());
  for (int len = 1; len <= 4; ++len) {
    TreeParam tp = tree_parameter(chain(len));
    CHECK(tp.value == 1);
    CHECK(tp.witness.empty());
  }
  CHECK_THROWS_AS(tree_parameter(antichain(2)), input_error);
}

TEST_CASE("tree parameter of the four element fork") {
  Poset y = y_poset();
  TreeParam tp = tree_parameter(y);
  CHECK(tp.value == 2);
  REQUIRE(tp.witness.size() == 1);
  CHECK(helpers_generate(y, tp.witness));
  CHECK_FALSE(helpers_generate(y, {}));

  // The dual fork gives the same value.
  Poset dual = build_poset(4, {{0, 2}, {1, 2}, {2, 3}});
  TreeParam dtp = tree_parameter(dual);
  CHECK(dtp.value == 2);
  CHECK(helpers_generate(dual, dtp.witness));
}

TEST_CASE("tree parameter search is minimal") {
  // Every returned value k means no (k-2)-element helper set works; spot
  // check by confirming the empty set fails wherever k = 2.
  Poset y = y_poset();
  CHECK_FALSE(helpers_generate(y, {}));
  auto lattice = enumerate_quleq(y);
  int successes = 0;
  for (const auto& h : lattice)
    if (helpers_generate(y, {h})) ++successes;
  CHECK(successes > 0);  // matches value == 2: some single helper suffices
}

TEST_CASE("tree parameter budget guards") {
  TreeOptions tight;
  tight.size_bound = 3;
  CHECK_THROWS_AS(tree_parameter(y_poset(), tight), budget_error);
  TreeOptions tiny;
  tiny.max_lattice = 5;
  CHECK_THROWS_AS(tree_parameter(y_poset(), tiny), budget_error);
}

TEST_CASE("numeric parameters of mixed sums") {
  Poset s = cardinal_sum({chain(2), y_poset(), antichain(1), chain(1)});
  PosetParams pr = compute_params(s);
  CHECK(pr.component_count == 4);
  CHECK(pr.max_size == 4);
  CHECK(pr.max_edges == 3);
  CHECK(pr.max_extremals == 3);
  CHECK(pr.forest);
  REQUIRE(pr.selectors.has_value());
  // Selector order: least tree parameter first, then fewer elements.
  CHECK(pr.selectors->first == 2);   // the singleton, ntp 0
  CHECK(pr.selectors->second == 3);  // the two element chain, ntp 1
  CHECK(pr.tp1 == 0);
  CHECK(pr.tp2 == 1);
  CHECK(pr.correction == 1);
  CHECK(pr.selector_witness1.empty());
  CHECK(pr.selector_witness2.empty());
}

TEST_CASE("selector ties break by size then id") {
  Poset s = cardinal_sum({chain(3), chain(1), chain(1), chain(2)});
  PosetParams pr = compute_params(s);
  REQUIRE(pr.selectors.has_value());
  CHECK(pr.selectors->first == 1);
  CHECK(pr.selectors->second == 2);
  CHECK(pr.correction == 2);

  Poset t = cardinal_sum({y_poset(), y_poset(), chain(1)});
  PosetParams qt = compute_params(t);
  REQUIRE(qt.selectors.has_value());
  CHECK(qt.selectors->first == 2);   // the chain, ntp 1
  CHECK(qt.selectors->second == 0);  // first fork by id, ntp 2
  CHECK(qt.tp1 == 1);
  CHECK(qt.tp2 == 2);
  CHECK(qt.correction == 3);
  REQUIRE(qt.selector_witness2.size() == 1);
  auto [sub, mem] = component_poset(t, components(t), 0);
  CHECK(helpers_generate(sub, qt.selector_witness2));
}

TEST_CASE("fewer than three components leaves selectors empty") {
  PosetParams pr = compute_params(cardinal_sum({chain(1), chain(2)}));
  CHECK(pr.component_count == 2);
  CHECK_FALSE(pr.selectors.has_value());
  CHECK(pr.correction == -1);
}

TEST_CASE("figure parameter regressions") {
  PosetParams f1 = compute_params(figure1());
  CHECK(f1.component_count == 7);
  CHECK(f1.max_size == 6);
  CHECK(f1.max_edges == 5);
  CHECK(f1.max_extremals == 4);
  CHECK(f1.forest);
  CHECK(f1.tp1 == 1);
  CHECK(f1.tp2 == 1);
  CHECK(f1.correction == 2);
  REQUIRE(f1.selectors.has_value());
  // The two smallest chains win the selection.
  ComponentInfo info = components(figure1());
  CHECK(info.members[f1.selectors->first].size() == 2);
  CHECK(info.members[f1.selectors->second].size() == 2);

  PosetParams f2 = compute_params(figure2());
  CHECK(f2.component_count == 14);
  CHECK(f2.max_size == 5);
  CHECK(f2.max_edges == 4);
  CHECK(f2.max_extremals == 2);
  CHECK(f2.forest);
  CHECK(f2.tp1 == 0);
  CHECK(f2.tp2 == 0);
  CHECK(f2.correction == 0);
}

TEST_CASE("isomorphic components share one search") {
  // Five forks: the search budget only covers one subset sweep, so the cache
  // must kick in for the other four.
  Poset s = sum_of_copies(y_poset(), 5);
  TreeOptions opts;
  opts.max_subsets = 20;  // a single fork needs at most 1 + 14 tries
  PosetParams pr = compute_params(s, opts);
  CHECK(pr.component_count == 5);
  CHECK(pr.tp1 == 2);
  CHECK(pr.tp2 == 2);
  CHECK(pr.correction == 4);
}
