#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "quleq/latterm.hpp"

using namespace quleq;

namespace {

// Plain recursive evaluator, no memo, used as the reference.
int eval_naive(const TermPtr& t, const std::vector<int>& vars,
               const std::map<std::string, int>& consts, int xm1) {
  switch (t->kind) {
    case LatTerm::Kind::Var:
      return t->var == -1 ? xm1 : vars.at(static_cast<size_t>(t->var));
    case LatTerm::Kind::Const:
      return consts.at(t->name);
    case LatTerm::Kind::Meet: {
      int acc = eval_naive(t->kids[0], vars, consts, xm1);
      for (size_t i = 1; i < t->kids.size(); ++i)
        acc = std::min(acc, eval_naive(t->kids[i], vars, consts, xm1));
      return acc;
    }
    case LatTerm::Kind::Join: {
      int acc = eval_naive(t->kids[0], vars, consts, xm1);
      for (size_t i = 1; i < t->kids.size(); ++i)
        acc = std::max(acc, eval_naive(t->kids[i], vars, consts, xm1));
      return acc;
    }
  }
  return 0;
}

int eval_chain(const TermPtr& t, const std::vector<int>& vars,
               const std::map<std::string, int>& consts, std::optional<int> xm1 = std::nullopt) {
  return eval_term<int>(t, std::span<const int>(vars), consts,
                        [](int a, int b) { return std::min(a, b); },
                        [](int a, int b) { return std::max(a, b); }, xm1);
}

}  // namespace

TEST_CASE("construction rules") {
  CHECK_THROWS_AS(make_var(-2), input_error);
  CHECK_THROWS_AS(make_const(""), input_error);
  CHECK_THROWS_AS(make_meet({}), input_error);
  TermPtr x = make_var(0);
  CHECK(make_meet({x}) == x);
  TermPtr nested = make_join({make_join({make_var(0), make_var(1)}), make_var(2)});
  CHECK(nested->kids.size() == 3);  // same-kind children flatten
  TermPtr mixed = make_meet({make_join({make_var(0), make_var(1)}), make_var(2)});
  CHECK(mixed->kids.size() == 2);
}

TEST_CASE("printing") {
  CHECK(print_term(make_var(0)) == "x0");
  CHECK(print_term(make_var(-1)) == "xm1");
  CHECK(print_term(make_const("bot")) == "#bot");
  CHECK(print_term(make_meet({make_var(1), make_var(2)})) == "(x1 ^ x2)");
  CHECK(print_term(make_join({make_var(0), make_const("a0"), make_var(-1)})) ==
        "(x0 v #a0 v xm1)");
}

TEST_CASE("parsing") {
  CHECK(print_term(parse_term("x3")) == "x3");
  CHECK(print_term(parse_term(" ( x0 ^ x1 ^ #bot ) ")) == "(x0 ^ x1 ^ #bot)");
  CHECK(print_term(parse_term("((x0 v x1) ^ xm1)")) == "((x0 v x1) ^ xm1)");
  CHECK(print_term(parse_term("(x2)")) == "x2");
  CHECK_THROWS_AS(parse_term(""), input_error);
  CHECK_THROWS_AS(parse_term("x"), input_error);
  CHECK_THROWS_AS(parse_term("xm2"), input_error);
  CHECK_THROWS_AS(parse_term("(x0 ^ x1 v x2)"), input_error);
  CHECK_THROWS_AS(parse_term("(x0 ^ x1"), input_error);
  CHECK_THROWS_AS(parse_term("x0 x1"), input_error);
  CHECK_THROWS_AS(parse_term("#"), input_error);
  try {
    parse_term("(x0 & x1)");
    FAIL("expected a syntax error");
  } catch (const input_error& e) {
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
}

TEST_CASE("print parse round trip") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    TermPtr t = random_term(4, 4, {"bot", "a0"}, rng);
    std::string s = print_term(t);
    CHECK(print_term(parse_term(s)) == s);
  }
}

TEST_CASE("arity and sizes") {
  CHECK(term_arity(make_var(5)) == 6);
  CHECK(term_arity(make_var(-1)) == 0);
  CHECK(term_arity(make_const("c")) == 0);
  CHECK(term_arity(parse_term("(x0 ^ (x3 v xm1))")) == 4);
  TermPtr shared = make_meet({make_var(0), make_var(1)});
  TermPtr big = make_join({make_meet({shared, make_var(2)}), make_meet({shared, make_var(3)})});
  // Flattening absorbs `shared` into each meet but its leaves stay shared.
  CHECK(term_tree_size(big) == 9);
  CHECK(term_dag_size(big) == 7);
}

TEST_CASE("evaluation matches the naive reference") {
  std::mt19937_64 rng(37);
  std::map<std::string, int> consts{{"bot", 0}, {"top", 9}};
  for (int trial = 0; trial < 500; ++trial) {
    TermPtr t = random_term(5, 4, {"bot", "top"}, rng);
    std::vector<int> vars(5);
    for (int& v : vars) v = static_cast<int>(rng() % 10);
    CHECK(eval_chain(t, vars, consts) == eval_naive(t, vars, consts, 0));
  }
}

TEST_CASE("evaluation with xm1") {
  std::map<std::string, int> consts;
  TermPtr t = parse_term("((x0 v xm1) ^ x1)");
  CHECK(eval_chain(t, {2, 5}, consts, 3) == 3);
  CHECK(eval_chain(t, {2, 5}, consts, 0) == 2);
  CHECK_THROWS_AS(eval_chain(t, {2, 5}, consts), input_error);
}

TEST_CASE("evaluation errors") {
  std::map<std::string, int> consts;
  CHECK_THROWS_AS(eval_chain(parse_term("(x0 ^ x7)"), {1, 2}, consts), input_error);
  CHECK_THROWS_AS(eval_chain(parse_term("#nope"), {1}, consts), input_error);
}

TEST_CASE("shared subterms evaluate once") {
  // A deep DAG whose tree expansion would be astronomically large.
  TermPtr t = make_meet({make_var(0), make_var(1)});
  for (int i = 0; i < 40; ++i) t = make_join({make_meet({t, make_var(0)}), make_meet({t, make_var(1)})});
  std::map<std::string, int> consts;
  CHECK(eval_chain(t, {3, 4}, consts) == 3);
  CHECK(term_dag_size(t) < 250);
}

TEST_CASE("random terms are well formed and monotone") {
  std::mt19937_64 rng(41);
  std::map<std::string, int> consts{{"bot", 0}};
  for (int trial = 0; trial < 300; ++trial) {
    TermPtr t = random_term(3, 3, {"bot"}, rng);
    CHECK(t->kind != LatTerm::Kind::Var);
    CHECK(t->kind != LatTerm::Kind::Const);
    int a = term_arity(t);
    CHECK(a >= 1);
    CHECK(a <= 3);
    std::vector<int> lo(3), hi(3);
    for (int i = 0; i < 3; ++i) {
      lo[i] = static_cast<int>(rng() % 5);
      hi[i] = lo[i] + static_cast<int>(rng() % 5);
    }
    CHECK(eval_chain(t, lo, consts) <= eval_chain(t, hi, consts));
  }
}

TEST_CASE("random terms are deterministic per seed") {
  std::mt19937_64 a(99), b(99);
  for (int i = 0; i < 50; ++i)
    CHECK(print_term(random_term(4, 4, {"bot"}, a)) == print_term(random_term(4, 4, {"bot"}, b)));
}
