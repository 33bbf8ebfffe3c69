#ifndef QULEQ_SERIALIZE_HPP
#define QULEQ_SERIALIZE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quleq/genset.hpp"
#include "quleq/latterm.hpp"
#include "quleq/poset.hpp"
#include "quleq/relation.hpp"

namespace quleq {

using json = nlohmann::json;

inline std::string b64_encode(const std::vector<std::uint8_t>& bytes) {
  static const char* alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (size_t i = 0; i < bytes.size(); i += 3) {
    std::uint32_t block = bytes[i] << 16;
    if (i + 1 < bytes.size()) block |= bytes[i + 1] << 8;
    if (i + 2 < bytes.size()) block |= bytes[i + 2];
    out += alphabet[block >> 18 & 63];
    out += alphabet[block >> 12 & 63];
    out += i + 1 < bytes.size() ? alphabet[block >> 6 & 63] : '=';
    out += i + 2 < bytes.size() ? alphabet[block & 63] : '=';
  }
  return out;
}

inline std::vector<std::uint8_t> b64_decode(const std::string& text) {
  auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (text.size() % 4 != 0) throw input_error("base64 length must be a multiple of 4");
  std::vector<std::uint8_t> out;
  for (size_t i = 0; i < text.size(); i += 4) {
    int pad = 0;
    std::uint32_t block = 0;
    for (int j = 0; j < 4; ++j) {
      char c = text[i + j];
      if (c == '=') {
        if (i + 4 != text.size() || j < 2) throw input_error("stray base64 padding");
        ++pad;
        block <<= 6;
      } else {
        if (pad) throw input_error("base64 data after padding");
        int v = value_of(c);
        if (v < 0) throw input_error(std::string("bad base64 character '") + c + "'");
        block = block << 6 | v;
      }
    }
    out.push_back(block >> 16 & 255);
    if (pad < 2) out.push_back(block >> 8 & 255);
    if (pad < 1) out.push_back(block & 255);
  }
  return out;
}

inline std::string rel_to_b64(const QuasiRel& r) { return b64_encode(r.encode()); }

inline QuasiRel rel_from_b64(const std::string& text) {
  auto bytes = b64_decode(text);
  return QuasiRel::decode(bytes);
}

inline json poset_to_json(const Poset& p) {
  json j;
  j["n"] = p.n;
  j["covers"] = json::array();
  for (auto [a, b] : p.covers) j["covers"].push_back({a, b});
  j["labels"] = p.labels;
  return j;
}

inline Poset poset_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("covers"))
    throw input_error("poset json needs n and covers");
  std::vector<std::pair<int, int>> covers;
  for (const auto& c : j.at("covers")) {
    if (!c.is_array() || c.size() != 2) throw input_error("each cover must be a pair");
    covers.emplace_back(c[0].get<int>(), c[1].get<int>());
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return build_poset(j.at("n").get<int>(), std::move(covers), std::move(labels));
}

namespace detail {
inline json rels_to_json(const std::vector<QuasiRel>& rels) {
  json out = json::array();
  for (const auto& r : rels) out.push_back(rel_to_b64(r));
  return out;
}

inline std::vector<QuasiRel> rels_from_json(const json& j) {
  std::vector<QuasiRel> out;
  for (const auto& s : j) out.push_back(rel_from_b64(s.get<std::string>()));
  return out;
}
}  // namespace detail

inline json plan_to_json(const GenPlan& plan) {
  json j;
  j["mode"] = plan.mode;
  j["bound"] = plan.bound;
  j["search_target_met"] = plan.search_target_met;
  json pj;
  pj["component_count"] = plan.params.component_count;
  pj["max_size"] = plan.params.max_size;
  pj["max_edges"] = plan.params.max_edges;
  pj["max_extremals"] = plan.params.max_extremals;
  pj["forest"] = plan.params.forest;
  if (plan.params.selectors)
    pj["selectors"] = {plan.params.selectors->first, plan.params.selectors->second};
  pj["tp1"] = plan.params.tp1;
  pj["tp2"] = plan.params.tp2;
  pj["correction"] = plan.params.correction;
  pj["selector_witness1"] = detail::rels_to_json(plan.params.selector_witness1);
  pj["selector_witness2"] = detail::rels_to_json(plan.params.selector_witness2);
  j["params"] = std::move(pj);
  j["E"] = detail::rels_to_json(plan.E);
  j["provenance"] = plan.provenance;
  j["strips"] = json::array();
  for (const auto& strip : plan.strips) {
    json s = json::array();
    for (auto [a, b] : strip) s.push_back({a, b});
    j["strips"].push_back(std::move(s));
  }
  j["threads"] = plan.threads;
  j["sperner_sets"] = plan.sperner_sets;
  j["g_eidx"] = plan.g_eidx;
  j["h0"] = detail::rels_to_json(plan.h0);
  j["h_eidx"] = plan.h_eidx;
  j["selector_comp"] = plan.selector_comp;
  j["selector_nabla_eidx"] = plan.selector_nabla_eidx;
  j["selector_f_eidx"] = plan.selector_f_eidx;
  j["selector_f_local"] = json::array();
  for (const auto& rels : plan.selector_f_local)
    j["selector_f_local"].push_back(detail::rels_to_json(rels));
  j["certificates"] = json::array();
  for (const auto& [pair, term] : plan.certificates)
    j["certificates"].push_back({pair.first, pair.second, print_term(term)});
  return j;
}

inline GenPlan plan_from_json(const json& j) {
  GenPlan plan;
  plan.mode = j.at("mode").get<std::string>();
  plan.bound = j.at("bound").get<int>();
  plan.search_target_met = j.at("search_target_met").get<bool>();
  const json& pj = j.at("params");
  plan.params.component_count = pj.at("component_count").get<int>();
  plan.params.max_size = pj.at("max_size").get<int>();
  plan.params.max_edges = pj.at("max_edges").get<int>();
  plan.params.max_extremals = pj.at("max_extremals").get<int>();
  plan.params.forest = pj.at("forest").get<bool>();
  if (pj.contains("selectors"))
    plan.params.selectors = {pj.at("selectors")[0].get<int>(), pj.at("selectors")[1].get<int>()};
  plan.params.tp1 = pj.at("tp1").get<int>();
  plan.params.tp2 = pj.at("tp2").get<int>();
  plan.params.correction = pj.at("correction").get<int>();
  plan.params.selector_witness1 = detail::rels_from_json(pj.at("selector_witness1"));
  plan.params.selector_witness2 = detail::rels_from_json(pj.at("selector_witness2"));
  plan.E = detail::rels_from_json(j.at("E"));
  plan.provenance = j.at("provenance").get<std::vector<std::string>>();
  for (const auto& s : j.at("strips")) {
    std::vector<std::pair<int, int>> strip;
    for (const auto& e : s) strip.emplace_back(e[0].get<int>(), e[1].get<int>());
    plan.strips.push_back(std::move(strip));
  }
  plan.threads = j.at("threads").get<ThreadCover>();
  plan.sperner_sets = j.at("sperner_sets").get<std::vector<std::vector<int>>>();
  plan.g_eidx = j.at("g_eidx").get<std::vector<int>>();
  plan.h0 = detail::rels_from_json(j.at("h0"));
  plan.h_eidx = j.at("h_eidx").get<std::vector<std::vector<int>>>();
  auto sc = j.at("selector_comp").get<std::vector<int>>();
  auto sn = j.at("selector_nabla_eidx").get<std::vector<int>>();
  auto sf = j.at("selector_f_eidx").get<std::vector<std::vector<int>>>();
  if (sc.size() != 2 || sn.size() != 2 || sf.size() != 2)
    throw input_error("selector arrays must have two entries");
  plan.selector_comp = {sc[0], sc[1]};
  plan.selector_nabla_eidx = {sn[0], sn[1]};
  plan.selector_f_eidx = {sf[0], sf[1]};
  const json& sl = j.at("selector_f_local");
  if (sl.size() != 2) throw input_error("selector locals must have two entries");
  for (int s = 0; s < 2; ++s)
    plan.selector_f_local[s] = detail::rels_from_json(sl[s]);
  for (const auto& c : j.at("certificates")) {
    if (!c.is_array() || c.size() != 3) throw input_error("certificate entries are triples");
    plan.certificates[{c[0].get<int>(), c[1].get<int>()}] =
        parse_term(c[2].get<std::string>());
  }
  return plan;
}

// Re-run the bit-exact check of every stored certificate against qum.
inline void verify_certificates(const Poset& p, const GenPlan& plan) {
  size_t expect = static_cast<size_t>(p.n) * (p.n - 1);
  if (plan.certificates.size() != expect)
    throw verify_error("expected " + std::to_string(expect) + " certificates, found " +
                       std::to_string(plan.certificates.size()));
  for (const auto& [pair, term] : plan.certificates) {
    QuasiRel got = eval_term<QuasiRel>(
        term, std::span<const QuasiRel>(plan.E), {{"bot", p.order}},
        [](const QuasiRel& x, const QuasiRel& y) { return meet(x, y); },
        [](const QuasiRel& x, const QuasiRel& y) { return join(x, y); });
    if (got != qum_pair(p, pair.first, pair.second))
      throw verify_error("stored certificate for (" + std::to_string(pair.first) + "," +
                         std::to_string(pair.second) + ") does not evaluate to qum");
  }
}

}  // namespace quleq

#endif
