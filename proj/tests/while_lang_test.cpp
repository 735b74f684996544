#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "elgot/laws.hpp"
#include "elgot/while_lang.hpp"

using namespace elgot;

namespace {

const char* kReadCoinWrite = "read; while true do { if coin then skip else write }";

std::string golden(const std::string& name) {
  std::ifstream in(std::string(ELGOT_TEST_DATA) + "/golden/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

Value n(const char* v) { return Value::atom(v); }

bool same(const Env& env, const std::string& p, const std::string& q, std::size_t depth = 6) {
  Kleisli<Tree> f = interpret(parse_program(p), env);
  Kleisli<Tree> g = interpret(parse_program(q), env);
  for (const auto& x : env.values().elements()) {
    if (!bisimilar(env.monad(), f(x), g(x), depth)) return false;
  }
  return true;
}

}  // namespace

TEST(Parser, Shapes) {
  EXPECT_EQ(parse_program("skip")->to_string(), "skip");
  EXPECT_EQ(parse_program("write; read; skip")->to_string(), "(seq write (seq read skip))");
  EXPECT_EQ(parse_program(kReadCoinWrite)->to_string(), "(seq read (while true (if coin skip write)))");
  StmtPtr loop = parse_program("\n  while b do p");
  EXPECT_EQ(loop->kind, Stmt::Kind::loop);
  EXPECT_EQ(loop->line, 2u);
  EXPECT_EQ(loop->column, 3u);
}

TEST(Parser, SyntaxErrorsCarryPositions) {
  try {
    parse_program("while do");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 7u);
  }
  EXPECT_THROW(parse_program("skip;"), SyntaxError);
  EXPECT_THROW(parse_program("if b then skip"), SyntaxError);
  EXPECT_THROW(parse_program("{ skip"), SyntaxError);
  EXPECT_THROW(parse_program("skip $"), SyntaxError);
}

TEST(Semantics, NameErrors) {
  Env fs = Env::standard(BaseMonad::finset());
  EXPECT_THROW(interpret(parse_program("jump"), fs), SemanticError);
  EXPECT_THROW(interpret(parse_program("while maybe do skip"), fs), SemanticError);
  Env m = Env::standard(BaseMonad::maybe());
  EXPECT_THROW(interpret(parse_program(kReadCoinWrite), m), ConfigError);
  EXPECT_THROW(run(parse_program("skip"), fs, n("9"), 2), ConfigError);
  EXPECT_THROW(Env::standard(BaseMonad::finset(), 0), ConfigError);
}

TEST(Semantics, SkipAndDivergence) {
  for (const BaseMonad& base : {BaseMonad::maybe(), BaseMonad::finset()}) {
    Env env = Env::standard(base);
    Kleisli<Tree> skip = interpret(parse_program("skip"), env);
    EXPECT_EQ(skip(n("4")).out(), base.eta(Value::inl(n("4"))));
    Kleisli<Tree> loop = interpret(parse_program("while true do skip"), env);
    EXPECT_EQ(loop(n("4")).out(), base.bottom());
  }
}

TEST(Semantics, WriteAndRead) {
  Env env = Env::standard(BaseMonad::finset(), 3);
  EXPECT_EQ(run(parse_program("write"), env, n("2"), 2), "{(op write 2 (* {(leaf 2)}))}");
  EXPECT_EQ(run(parse_program("read"), env, n("2"), 1), "{(op read * (0 {(leaf 0)}) (1 {(leaf 1)}) (2 {(leaf 2)}))}");
}

TEST(Semantics, EquationalLaws) {
  Env env = Env::standard(BaseMonad::finset(), 3);
  EXPECT_TRUE(same(env, "skip; write", "write"));
  EXPECT_TRUE(same(env, "write; skip", "write"));
  EXPECT_TRUE(same(env, "{write; read}; write", "write; {read; write}"));
  EXPECT_TRUE(same(env, "while false do write", "skip"));
  EXPECT_TRUE(same(env, "if true then write else read", "write"));
  EXPECT_FALSE(same(env, "write", "read"));
  // Loop unfolding.
  for (const char* body : {"write", "read", "if coin then skip else write"}) {
    for (const char* pred : {"coin", "true", "false"}) {
      std::string w = std::string("while ") + pred + " do " + body;
      EXPECT_TRUE(same(env, w, std::string("if ") + pred + " then {" + body + "; " + w + "} else skip")) << w;
    }
  }
}

TEST(Semantics, CoinLoop) {
  Env env = Env::standard(BaseMonad::finset());
  EXPECT_EQ(run(parse_program("while coin do write"), env, n("1"), 3), golden("run_coin_loop.txt"));
}

TEST(Semantics, ReadThenWriteForeverUnderFinSet) {
  Env env = Env::standard(BaseMonad::finset());
  std::string out = run(parse_program(kReadCoinWrite), env, n("0"), 3);
  EXPECT_EQ(out, golden("run_read_coin_write.txt"));
  // Every read branch starts with a write: the silent branch that only
  // chooses skip forever is ⊥, and ∅ vanishes in a FinSet union.
  for (int v = 0; v < 8; ++v) {
    std::string branch = "(" + std::to_string(v) + " {(op write";
    EXPECT_NE(out.find(branch), std::string::npos) << v;
  }
  EXPECT_EQ(out.find("{}"), std::string::npos);
}

TEST(Semantics, NondetStateBase) {
  Env env = Env::standard(BaseMonad::nondet_state(Carrier::atoms("S", {"s0", "s1"})));
  EXPECT_EQ(run(parse_program("write"), env, n("2"), 2), golden("run_write_nondet.txt"));
  Kleisli<Tree> loop = interpret(parse_program("while true do skip"), env);
  EXPECT_EQ(loop(n("0")).out(), env.monad().base().bottom());
}
