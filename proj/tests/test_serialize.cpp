#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "quleq/serialize.hpp"

using namespace quleq;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

}  // namespace

TEST_CASE("base64 fixed vectors") {
  CHECK(b64_encode({}) == "");
  CHECK(b64_encode(bytes_of("f")) == "Zg==");
  CHECK(b64_encode(bytes_of("fo")) == "Zm8=");
  CHECK(b64_encode(bytes_of("foo")) == "Zm9v");
  CHECK(b64_encode(bytes_of("foob")) == "Zm9vYg==");
  CHECK(b64_encode(bytes_of("fooba")) == "Zm9vYmE=");
  CHECK(b64_encode(bytes_of("foobar")) == "Zm9vYmFy");
  CHECK(b64_decode("Zm9vYmFy") == bytes_of("foobar"));
  CHECK(b64_decode("Zg==") == bytes_of("f"));
  CHECK(b64_decode("") == std::vector<std::uint8_t>{});
}

TEST_CASE("base64 round trips") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::uint8_t> data(rng() % 40);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng());
    CHECK(b64_decode(b64_encode(data)) == data);
  }
}

TEST_CASE("base64 rejects malformed text") {
  CHECK_THROWS_AS(b64_decode("Zg"), input_error);
  CHECK_THROWS_AS(b64_decode("Zg=?"), input_error);
  CHECK_THROWS_AS(b64_decode("Z==="), input_error);
  CHECK_THROWS_AS(b64_decode("Zg==Zg=="), input_error);
  CHECK_THROWS_AS(b64_decode("Zm 9"), input_error);
  CHECK_THROWS_AS(b64_decode("=m9v"), input_error);
}

TEST_CASE("relation strings") {
  std::mt19937_64 rng(47);
  Poset y = y_poset();
  for (int t = 0; t < 50; ++t) {
    QuasiRel r = random_quleq_element(y, rng);
    CHECK(rel_from_b64(rel_to_b64(r)) == r);
  }
  CHECK_THROWS_AS(rel_from_b64("AAAA"), input_error);
}

TEST_CASE("poset json round trip") {
  for (const Poset& p : {y_poset(), figure1(), chain(4), antichain(3)}) {
    Poset back = poset_from_json(poset_to_json(p));
    CHECK(back.n == p.n);
    CHECK(back.covers == p.covers);
    CHECK(back.labels == p.labels);
    CHECK(back.order == p.order);
  }
  CHECK_THROWS_AS(poset_from_json(json::array()), input_error);
  CHECK_THROWS_AS(poset_from_json(json{{"n", 2}}), input_error);
  CHECK_THROWS_AS(poset_from_json(json{{"n", 2}, {"covers", {{0, 1, 2}}}}), input_error);
}

TEST_CASE("plan json round trip") {
  Poset p = cardinal_sum({chain(2), chain(1), chain(1)});
  GenPlan plan = synthesize(p);
  build_certificates(p, plan);
  json j = plan_to_json(plan);
  GenPlan back = plan_from_json(j);
  CHECK(back.mode == plan.mode);
  CHECK(back.bound == plan.bound);
  CHECK(back.search_target_met == plan.search_target_met);
  CHECK(back.E == plan.E);
  CHECK(back.provenance == plan.provenance);
  CHECK(back.strips == plan.strips);
  CHECK(back.threads == plan.threads);
  CHECK(back.sperner_sets == plan.sperner_sets);
  CHECK(back.g_eidx == plan.g_eidx);
  CHECK(back.h0 == plan.h0);
  CHECK(back.h_eidx == plan.h_eidx);
  CHECK(back.selector_comp == plan.selector_comp);
  CHECK(back.selector_nabla_eidx == plan.selector_nabla_eidx);
  CHECK(back.selector_f_eidx == plan.selector_f_eidx);
  CHECK(back.selector_f_local == plan.selector_f_local);
  REQUIRE(back.certificates.size() == plan.certificates.size());
  for (const auto& [key, term] : plan.certificates) {
    auto it = back.certificates.find(key);
    REQUIRE(it != back.certificates.end());
    CHECK(print_term(it->second) == print_term(term));
  }
  CHECK(back.params.component_count == plan.params.component_count);
  CHECK(back.params.correction == plan.params.correction);
  CHECK_NOTHROW(verify_certificates(p, back));
}

TEST_CASE("certificate verification catches corruption") {
  Poset p = cardinal_sum({chain(1), chain(1), antichain(2)});
  GenPlan plan = synthesize(p);
  build_certificates(p, plan);
  CHECK_NOTHROW(verify_certificates(p, plan));

  GenPlan wrong = plan_from_json(plan_to_json(plan));
  auto first = wrong.certificates.begin();
  auto second = std::next(first);
  first->second = second->second;  // now evaluates to the wrong relation
  CHECK_THROWS_AS(verify_certificates(p, wrong), verify_error);

  GenPlan missing = plan_from_json(plan_to_json(plan));
  missing.certificates.erase(missing.certificates.begin());
  CHECK_THROWS_AS(verify_certificates(p, missing), verify_error);
}

TEST_CASE("plan json rejects bad shapes") {
  Poset p = cardinal_sum({chain(1), chain(1), antichain(2)});
  GenPlan plan = synthesize(p);
  json j = plan_to_json(plan);
  json bad = j;
  bad.erase("mode");
  CHECK_THROWS(plan_from_json(bad));
  bad = j;
  bad["selector_comp"] = {1};
  CHECK_THROWS_AS(plan_from_json(bad), input_error);
}
