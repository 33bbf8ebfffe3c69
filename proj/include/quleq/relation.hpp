#ifndef QULEQ_RELATION_HPP
#define QULEQ_RELATION_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quleq/error.hpp"

namespace quleq {

// Binary relation on {0,...,n-1} as a packed bit matrix, one row per element.
// Quasiorders (reflexive transitive relations) are the main use; the type
// itself stores any relation and offers the closure that makes one.
class QuasiRel {
 public:
  QuasiRel() : n_(0), words_(0) {}

  explicit QuasiRel(int n, bool reflexive = false)
      : n_(n), words_((n + 63) / 64), bits_(static_cast<size_t>(n) * words_, 0) {
    if (n < 0) throw input_error("relation size must be nonnegative");
    if (reflexive)
      for (int i = 0; i < n_; ++i) set(i, i);
  }

  static QuasiRel diagonal(int n) { return QuasiRel(n, true); }

  static QuasiRel full(int n) {
    QuasiRel r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r.set(i, j);
    return r;
  }

  int dim() const { return n_; }
  int words_per_row() const { return words_; }

  bool get(int i, int j) const {
    return (bits_[static_cast<size_t>(i) * words_ + (j >> 6)] >> (j & 63)) & 1u;
  }

  void set(int i, int j, bool value = true) {
    std::uint64_t& w = bits_[static_cast<size_t>(i) * words_ + (j >> 6)];
    std::uint64_t mask = std::uint64_t(1) << (j & 63);
    if (value)
      w |= mask;
    else
      w &= ~mask;
  }

  const std::uint64_t* row(int i) const { return bits_.data() + static_cast<size_t>(i) * words_; }
  std::uint64_t* row(int i) { return bits_.data() + static_cast<size_t>(i) * words_; }

  // Reflexive-transitive closure in place.
  void close() {
    for (int i = 0; i < n_; ++i) set(i, i);
    for (int k = 0; k < n_; ++k) {
      const std::uint64_t* rk = row(k);
      for (int i = 0; i < n_; ++i) {
        if (!get(i, k) || i == k) continue;
        std::uint64_t* ri = row(i);
        for (int w = 0; w < words_; ++w) ri[w] |= rk[w];
      }
    }
  }

  bool is_reflexive() const {
    for (int i = 0; i < n_; ++i)
      if (!get(i, i)) return false;
    return true;
  }

  bool is_transitive() const {
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        if (!get(i, k)) continue;
        for (int w = 0; w < words_; ++w)
          if (row(k)[w] & ~row(i)[w]) return false;
      }
    return true;
  }

  bool is_antisymmetric() const {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (get(i, j) && get(j, i)) return false;
    return true;
  }

  bool subset_of(const QuasiRel& o) const {
    check_same_dim(o);
    for (size_t w = 0; w < bits_.size(); ++w)
      if (bits_[w] & ~o.bits_[w]) return false;
    return true;
  }

  bool operator==(const QuasiRel& o) const { return n_ == o.n_ && bits_ == o.bits_; }
  bool operator!=(const QuasiRel& o) const { return !(*this == o); }

  // Lexicographic on the packed rows; a stable total order for canonical lists.
  bool operator<(const QuasiRel& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return bits_ < o.bits_;
  }

  size_t pair_count() const {
    size_t c = 0;
    for (std::uint64_t w : bits_) c += std::popcount(w);
    return c;
  }

  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (get(i, j)) out.emplace_back(i, j);
    return out;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(n_);
    for (std::uint64_t w : bits_) {
      h ^= w;
      h *= 1099511628211ull;
      h ^= h >> 29;
    }
    return h;
  }

  // Body bytes: the n*n bits row-major, eight per byte, most significant first.
  std::vector<std::uint8_t> encode_body() const {
    std::vector<std::uint8_t> out((static_cast<size_t>(n_) * n_ + 7) / 8, 0);
    size_t bit = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j, ++bit)
        if (get(i, j)) out[bit >> 3] |= std::uint8_t(0x80u >> (bit & 7));
    return out;
  }

  // Full encoding: u32 little-endian dimension header, then the body.
  std::vector<std::uint8_t> encode() const {
    std::vector<std::uint8_t> out;
    out.reserve(4 + (static_cast<size_t>(n_) * n_ + 7) / 8);
    std::uint32_t n = static_cast<std::uint32_t>(n_);
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>((n >> (8 * b)) & 0xff));
    auto body = encode_body();
    out.insert(out.end(), body.begin(), body.end());
    return out;
  }

  static QuasiRel decode(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) throw input_error("relation blob too short for header");
    std::uint32_t n = 0;
    for (int b = 0; b < 4; ++b) n |= static_cast<std::uint32_t>(bytes[b]) << (8 * b);
    if (n > 4096) throw input_error("relation header dimension implausibly large");
    size_t body = (static_cast<size_t>(n) * n + 7) / 8;
    if (bytes.size() != 4 + body) throw input_error("relation blob length mismatch");
    QuasiRel r(static_cast<int>(n));
    size_t bit = 0;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j, ++bit)
        if (bytes[4 + (bit >> 3)] & (0x80u >> (bit & 7))) r.set(static_cast<int>(i), static_cast<int>(j));
    return r;
  }

 private:
  void check_same_dim(const QuasiRel& o) const {
    if (n_ != o.n_) throw input_error("relation dimension mismatch");
  }

  friend QuasiRel meet(const QuasiRel& a, const QuasiRel& b);
  friend QuasiRel rel_union(const QuasiRel& a, const QuasiRel& b);

  int n_;
  int words_;
  std::vector<std::uint64_t> bits_;
};

inline QuasiRel tr_close(QuasiRel r) {
  r.close();
  return r;
}

// Meet in Quo: plain intersection (closed whenever both arguments are).
inline QuasiRel meet(const QuasiRel& a, const QuasiRel& b) {
  a.check_same_dim(b);
  QuasiRel out = a;
  for (size_t w = 0; w < out.bits_.size(); ++w) out.bits_[w] &= b.bits_[w];
  return out;
}

inline QuasiRel rel_union(const QuasiRel& a, const QuasiRel& b) {
  a.check_same_dim(b);
  QuasiRel out = a;
  for (size_t w = 0; w < out.bits_.size(); ++w) out.bits_[w] |= b.bits_[w];
  return out;
}

// Join in Quo: closure of the union.
inline QuasiRel join(const QuasiRel& a, const QuasiRel& b) {
  QuasiRel out = rel_union(a, b);
  out.close();
  return out;
}

inline QuasiRel big_join(std::span<const QuasiRel> items, int dim_if_empty = -1) {
  if (items.empty()) {
    if (dim_if_empty < 0) throw input_error("empty join needs an ambient dimension");
    return QuasiRel::diagonal(dim_if_empty);
  }
  QuasiRel out = items[0];
  for (size_t i = 1; i < items.size(); ++i) out = rel_union(out, items[i]);
  out.close();
  return out;
}

}  // namespace quleq

#endif
