#ifndef QULEQ_AUTHSIM_HPP
#define QULEQ_AUTHSIM_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quleq/genset.hpp"
#include "quleq/latterm.hpp"
#include "quleq/quolattice.hpp"
#include "quleq/serialize.hpp"

namespace quleq {

struct AuthConfig {
  int b = 8;             // challenge terms per session
  int depth = 5;         // random term depth
  bool permute = false;  // post-process responses with a keyed byte permutation
};

// Both parties hold the poset, the vector h of filter elements (a generating
// set prefix plus optional padding), and the post-processing choice.
struct SharedKey {
  Poset poset;
  std::vector<QuasiRel> h;
  size_t gen_count = 0;  // h[0..gen_count) is the verified generating set
  AuthConfig cfg;

  std::uint64_t fingerprint() const {
    std::uint64_t acc = 0xcbf29ce484222325ull;
    for (const auto& r : h) {
      acc ^= r.hash();
      acc *= 1099511628211ull;
    }
    acc ^= static_cast<std::uint64_t>(cfg.b) << 32 | static_cast<std::uint64_t>(cfg.depth);
    return acc;
  }
};

inline SharedKey keygen(const Poset& p, const GenPlan& plan, int pad, std::uint64_t seed,
                        AuthConfig cfg = {}) {
  if (pad < 0) throw input_error("pad must be nonnegative");
  SharedKey key;
  key.poset = p;
  key.h = plan.E;
  key.gen_count = plan.E.size();
  key.cfg = cfg;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < pad; ++i) key.h.push_back(random_quleq_element(p, rng));
  return key;
}

struct Challenge {
  std::uint64_t nonce = 0;
  std::vector<TermPtr> terms;
};

struct Response {
  std::vector<std::vector<std::uint8_t>> blobs;  // one encoding per term
};

inline Challenge make_challenge(const SharedKey& key, std::uint64_t seed) {
  if (key.h.empty()) throw input_error("key has no elements");
  std::mt19937_64 rng(seed);
  Challenge ch;
  ch.nonce = rng();
  for (int i = 0; i < key.cfg.b; ++i)
    ch.terms.push_back(random_term(static_cast<int>(key.h.size()), key.cfg.depth, {"bot"}, rng));
  return ch;
}

namespace detail {
inline void apply_permutation(const SharedKey& key, int component,
                              std::vector<std::uint8_t>& blob) {
  if (!key.cfg.permute || blob.size() <= 5) return;
  std::mt19937_64 rng(key.fingerprint() ^
                      0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(component + 1));
  std::vector<size_t> perm(blob.size() - 4);  // body bytes only, header stays
  std::iota(perm.begin(), perm.end(), size_t{4});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::uint8_t> body(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) body[i] = blob[perm[i]];
  std::copy(body.begin(), body.end(), blob.begin() + 4);
}
}  // namespace detail

inline Response respond(const SharedKey& key, const Challenge& ch) {
  Response resp;
  std::map<std::string, QuasiRel> consts{{"bot", key.poset.order}};
  for (size_t i = 0; i < ch.terms.size(); ++i) {
    QuasiRel u = eval_term<QuasiRel>(
        ch.terms[i], std::span<const QuasiRel>(key.h), consts,
        [](const QuasiRel& x, const QuasiRel& y) { return meet(x, y); },
        [](const QuasiRel& x, const QuasiRel& y) { return join(x, y); });
    std::vector<std::uint8_t> blob = u.encode();
    detail::apply_permutation(key, static_cast<int>(i), blob);
    resp.blobs.push_back(std::move(blob));
  }
  return resp;
}

struct Verdict {
  bool accept = false;
  std::string reason;
};

inline Verdict verify(const SharedKey& key, const Challenge& ch, const Response& resp) {
  if (resp.blobs.size() != ch.terms.size())
    return {false, "expected " + std::to_string(ch.terms.size()) + " components, got " +
                       std::to_string(resp.blobs.size())};
  Response expected = respond(key, ch);
  for (size_t i = 0; i < expected.blobs.size(); ++i) {
    if (resp.blobs[i].size() != expected.blobs[i].size())
      return {false, "component " + std::to_string(i) + " has wrong length"};
    if (resp.blobs[i] != expected.blobs[i])
      return {false, "component " + std::to_string(i) + " differs"};
  }
  return {true, ""};
}

// Keystream: the body bytes of every response component, headers stripped.
inline std::vector<std::uint8_t> vernam_key(const Response& resp) {
  std::vector<std::uint8_t> out;
  for (const auto& blob : resp.blobs) {
    if (blob.size() < 4) throw input_error("response blob too short");
    out.insert(out.end(), blob.begin() + 4, blob.end());
  }
  return out;
}

inline std::vector<std::uint8_t> vernam_xor(const std::vector<std::uint8_t>& keystream,
                                            const std::vector<std::uint8_t>& message) {
  if (message.size() > keystream.size())
    throw input_error("message of " + std::to_string(message.size()) +
                      " bytes exceeds the keystream of " + std::to_string(keystream.size()));
  std::vector<std::uint8_t> out(message.size());
  for (size_t i = 0; i < message.size(); ++i) out[i] = message[i] ^ keystream[i];
  return out;
}

struct Transcript {
  std::vector<std::string> lines;
  bool accepted = false;
  std::string reason;

  std::string text() const {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
  }
};

namespace detail {
inline json challenge_to_json(const Challenge& ch) {
  json terms = json::array();
  for (const auto& t : ch.terms) terms.push_back(print_term(t));
  return json{{"nonce", ch.nonce}, {"terms", std::move(terms)}};
}

inline Challenge challenge_from_json(const json& j) {
  Challenge ch;
  ch.nonce = j.at("nonce").get<std::uint64_t>();
  for (const auto& t : j.at("terms")) ch.terms.push_back(parse_term(t.get<std::string>()));
  return ch;
}

inline json response_to_json(const Response& resp) {
  json blobs = json::array();
  for (const auto& b : resp.blobs) blobs.push_back(b64_encode(b));
  return json{{"blobs", std::move(blobs)}};
}

inline Response response_from_json(const json& j) {
  Response resp;
  for (const auto& b : j.at("blobs")) resp.blobs.push_back(b64_decode(b.get<std::string>()));
  return resp;
}
}  // namespace detail

// One full session over the line-delimited loopback wire: every message is
// serialized to a JSON line and parsed back before the other side acts on it.
inline Transcript run_loopback_session(const SharedKey& key, const std::string& session_id,
                                       std::uint64_t seed,
                                       const Response* replayed = nullptr,
                                       int tamper_component = -1) {
  Transcript tr;
  auto post = [&tr](json msg) {
    std::string line = msg.dump();
    tr.lines.push_back(line);
    return json::parse(line);
  };
  post({{"type", "hello"},
        {"session", session_id},
        {"payload", {{"n", key.poset.n}, {"b", key.cfg.b}, {"k", key.h.size()}}}});
  json chj = post({{"type", "challenge"},
                   {"session", session_id},
                   {"payload", detail::challenge_to_json(make_challenge(key, seed))}});
  Challenge ch = detail::challenge_from_json(chj.at("payload"));
  Response resp = replayed ? *replayed : respond(key, ch);
  if (tamper_component >= 0 && tamper_component < static_cast<int>(resp.blobs.size()) &&
      !resp.blobs[tamper_component].empty())
    resp.blobs[tamper_component].back() ^= 1;
  json rj = post({{"type", "response"},
                  {"session", session_id},
                  {"payload", detail::response_to_json(resp)}});
  Verdict v = verify(key, ch, detail::response_from_json(rj.at("payload")));
  post({{"type", "verdict"},
        {"session", session_id},
        {"payload", {{"accept", v.accept}, {"reason", v.reason}}}});
  tr.accepted = v.accept;
  tr.reason = v.reason;
  return tr;
}

}  // namespace quleq

#endif
