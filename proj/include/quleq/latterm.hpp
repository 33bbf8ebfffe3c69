#ifndef QULEQ_LATTERM_HPP
#define QULEQ_LATTERM_HPP

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "quleq/error.hpp"

namespace quleq {

// Lattice term over variables x0,x1,... (xm1 encodes the extra slot x_{-1}),
// named constants #name, and n-ary meet '^' and join 'v'. Immutable nodes,
// shared subterms.
struct LatTerm;
using TermPtr = std::shared_ptr<const LatTerm>;

struct LatTerm {
  enum class Kind { Var, Const, Meet, Join };
  Kind kind;
  int var = 0;                  // Kind::Var, -1 allowed
  std::string name;             // Kind::Const
  std::vector<TermPtr> kids;    // operators, size >= 2
};

inline TermPtr make_var(int index) {
  if (index < -1) throw input_error("variable index below -1");
  auto t = std::make_shared<LatTerm>();
  t->kind = LatTerm::Kind::Var;
  t->var = index;
  return t;
}

inline TermPtr make_const(std::string name) {
  if (name.empty()) throw input_error("constant needs a name");
  auto t = std::make_shared<LatTerm>();
  t->kind = LatTerm::Kind::Const;
  t->name = std::move(name);
  return t;
}

namespace detail {
inline TermPtr make_op(LatTerm::Kind kind, std::vector<TermPtr> kids) {
  std::vector<TermPtr> flat;
  for (auto& k : kids) {
    if (!k) throw input_error("null subterm");
    if (k->kind == kind)
      flat.insert(flat.end(), k->kids.begin(), k->kids.end());
    else
      flat.push_back(std::move(k));
  }
  if (flat.empty()) throw input_error("operator needs at least one operand");
  if (flat.size() == 1) return flat[0];
  auto t = std::make_shared<LatTerm>();
  t->kind = kind;
  t->kids = std::move(flat);
  return t;
}
}  // namespace detail

inline TermPtr make_meet(std::vector<TermPtr> kids) {
  return detail::make_op(LatTerm::Kind::Meet, std::move(kids));
}

inline TermPtr make_join(std::vector<TermPtr> kids) {
  return detail::make_op(LatTerm::Kind::Join, std::move(kids));
}

inline void print_term(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case LatTerm::Kind::Var:
      out += t->var == -1 ? std::string("xm1") : "x" + std::to_string(t->var);
      break;
    case LatTerm::Kind::Const:
      out += "#" + t->name;
      break;
    case LatTerm::Kind::Meet:
    case LatTerm::Kind::Join: {
      const char* op = t->kind == LatTerm::Kind::Meet ? " ^ " : " v ";
      out += "(";
      for (size_t i = 0; i < t->kids.size(); ++i) {
        if (i) out += op;
        print_term(t->kids[i], out);
      }
      out += ")";
      break;
    }
  }
}

inline std::string print_term(const TermPtr& t) {
  std::string out;
  print_term(t, out);
  return out;
}

namespace detail {

struct TermParser {
  const std::string& src;
  size_t pos = 0;

  explicit TermParser(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw input_error("term syntax error at position " + std::to_string(pos) + ": " + what);
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  TermPtr parse_primary() {
    char c = peek();
    if (c == '(') {
      ++pos;
      TermPtr first = parse_primary();
      std::vector<TermPtr> kids{first};
      std::optional<char> op;
      while (true) {
        char d = peek();
        if (d == ')') {
          ++pos;
          break;
        }
        if (d != '^' && d != 'v') fail("expected operator or ')'");
        if (op && *op != d) fail("mixed operators inside one parenthesis");
        op = d;
        ++pos;
        kids.push_back(parse_primary());
      }
      if (kids.size() == 1) return kids[0];
      return op == '^' ? make_meet(std::move(kids)) : make_join(std::move(kids));
    }
    if (c == 'x') {
      ++pos;
      if (pos < src.size() && src[pos] == 'm') {
        bool ok = src.compare(pos, 2, "m1") == 0 &&
                  (pos + 2 >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos + 2])));
        if (!ok) fail("only xm1 is a negative variable");
        pos += 2;
        return make_var(-1);
      }
      size_t start = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      if (pos == start) fail("variable needs digits");
      return make_var(std::stoi(src.substr(start, pos - start)));
    }
    if (c == '#') {
      ++pos;
      size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      if (pos == start) fail("constant needs a name");
      return make_const(src.substr(start, pos - start));
    }
    fail("expected term");
  }
};

}  // namespace detail

inline TermPtr parse_term(const std::string& text) {
  detail::TermParser p(text);
  TermPtr t = p.parse_primary();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

// Highest variable index plus one; xm1 alone gives 0.
inline int term_arity(const TermPtr& t) {
  switch (t->kind) {
    case LatTerm::Kind::Var:
      return t->var + 1;
    case LatTerm::Kind::Const:
      return 0;
    default: {
      int a = 0;
      for (const auto& k : t->kids) a = std::max(a, term_arity(k));
      return a;
    }
  }
}

// Size of the expanded term tree; shared nodes counted each time they appear.
inline size_t term_tree_size(const TermPtr& t,
                             std::unordered_map<const LatTerm*, size_t>* memo = nullptr) {
  std::unordered_map<const LatTerm*, size_t> local;
  if (!memo) memo = &local;
  auto it = memo->find(t.get());
  if (it != memo->end()) return it->second;
  size_t total = 1;
  for (const auto& k : t->kids) total += term_tree_size(k, memo);
  (*memo)[t.get()] = total;
  return total;
}

// Distinct nodes in the shared representation.
inline size_t term_dag_size(const TermPtr& t) {
  std::unordered_map<const LatTerm*, bool> seen;
  size_t count = 0;
  auto walk = [&](auto&& self, const TermPtr& u) -> void {
    if (seen.count(u.get())) return;
    seen[u.get()] = true;
    ++count;
    for (const auto& k : u->kids) self(self, k);
  };
  walk(walk, t);
  return count;
}

// Evaluation over any lattice given by binary meet/join on values.
// Missing variables and unknown constants are input errors.
template <class Value, class MeetFn, class JoinFn>
Value eval_term(const TermPtr& t, std::span<const Value> vars,
                const std::map<std::string, Value>& consts, MeetFn&& fmeet, JoinFn&& fjoin,
                const std::optional<Value>& xm1 = std::nullopt) {
  std::unordered_map<const LatTerm*, Value> memo;
  auto run = [&](auto&& self, const TermPtr& u) -> Value {
    auto it = memo.find(u.get());
    if (it != memo.end()) return it->second;
    Value out;
    switch (u->kind) {
      case LatTerm::Kind::Var:
        if (u->var == -1) {
          if (!xm1) throw input_error("term uses xm1 but no value was supplied");
          out = *xm1;
        } else {
          if (u->var >= static_cast<int>(vars.size()))
            throw input_error("term uses x" + std::to_string(u->var) + " but only " +
                              std::to_string(vars.size()) + " values were supplied");
          out = vars[u->var];
        }
        break;
      case LatTerm::Kind::Const: {
        auto c = consts.find(u->name);
        if (c == consts.end()) throw input_error("unknown constant #" + u->name);
        out = c->second;
        break;
      }
      case LatTerm::Kind::Meet:
      case LatTerm::Kind::Join: {
        out = self(self, u->kids[0]);
        for (size_t i = 1; i < u->kids.size(); ++i) {
          Value next = self(self, u->kids[i]);
          out = u->kind == LatTerm::Kind::Meet ? fmeet(out, next) : fjoin(out, next);
        }
        break;
      }
    }
    memo.emplace(u.get(), out);
    return out;
  };
  return run(run, t);
}

// Random term of the given arity and operator depth. The result always has an
// operator at the root and at least one non-constant leaf; bare variables and
// constant-only terms are rejected and regenerated.
inline TermPtr random_term(int arity, int depth, const std::vector<std::string>& constants,
                           std::mt19937_64& rng) {
  if (arity < 0) throw input_error("negative arity");
  if (arity == 0) throw input_error("random term needs at least one variable to avoid constant-only output");
  if (depth < 1) throw input_error("random term needs depth at least 1");
  std::uniform_int_distribution<int> var_pick(0, arity - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> percent(0, 99);
  auto leaf = [&]() -> TermPtr {
    if (!constants.empty() && percent(rng) < 25) {
      std::uniform_int_distribution<size_t> cpick(0, constants.size() - 1);
      return make_const(constants[cpick(rng)]);
    }
    return make_var(var_pick(rng));
  };
  auto gen = [&](auto&& self, int d, bool force_op) -> TermPtr {
    if (d == 0 || (!force_op && percent(rng) < 30)) return leaf();
    TermPtr a = self(self, d - 1, false);
    TermPtr b = self(self, d - 1, false);
    std::vector<TermPtr> kids{a, b};
    if (percent(rng) < 20) kids.push_back(self(self, d - 1, false));
    return coin(rng) ? make_join(std::move(kids)) : make_meet(std::move(kids));
  };
  for (int attempt = 0; attempt < 1000; ++attempt) {
    TermPtr t = gen(gen, depth, true);
    if (t->kind != LatTerm::Kind::Meet && t->kind != LatTerm::Kind::Join) continue;
    if (term_arity(t) == 0) continue;  // all leaves constant
    return t;
  }
  throw input_error("failed to generate a nontrivial random term");
}

}  // namespace quleq

#endif
