#include <gtest/gtest.h>

#include "elgot/laws.hpp"

using namespace elgot;

namespace {

Value a(const char* s) { return Value::atom(s); }

const Carrier X2 = Carrier::atoms("X", {"x0", "x1"});
const Carrier Y2 = Carrier::atoms("Y", {"y0", "y1"});
const Carrier YX = Carrier::sum(Y2, X2);

Resumption res(const BaseMonad& base) { return Resumption(base, test_signature(), 6); }

Value unary(const char* p, const Value& next) { return Value::op("a", Value::atom(p), {{Value::atom("u"), next}}); }

std::string spine(const std::string& p, std::size_t n) {
  return n == 0 ? "{(cut)}" : "{(op a " + p + " (u " + spine(p, n - 1) + "))}";
}

}  // namespace

TEST(CheckGuarded, LeavesOnly) {
  Resumption r = res(BaseMonad::finset());
  Kleisli<Tree> f(X2, YX, [r](const Value&) { return r.eta(Value::inl(Value::atom("y0"))); });
  GuardednessWitness w = check_guarded(r, f);
  EXPECT_TRUE(w.guarded);
  ASSERT_TRUE(w.u.has_value());
}

TEST(CheckGuarded, BareRecursionIsReported) {
  Resumption r = res(BaseMonad::finset());
  Kleisli<Tree> f(X2, YX, [r](const Value& x) { return r.eta(Value::inr(x)); });
  GuardednessWitness w = check_guarded(r, f);
  EXPECT_FALSE(w.guarded);
  EXPECT_EQ(w.input, a("x0"));
  EXPECT_EQ(w.leaf, Value::inr(a("x0")));
  EXPECT_NE(w.describe().find("x0"), std::string::npos);
  try {
    solve_guarded(r, f);
    FAIL() << "expected UnguardedError";
  } catch (const UnguardedError& e) {
    EXPECT_NE(std::string(e.what()).find("x0"), std::string::npos);
  }
}

TEST(CheckGuarded, RecursionUnderAnOperation) {
  Resumption r = res(BaseMonad::finset());
  Kleisli<Tree> f(X2, YX, [r](const Value& x) { return r.iota(unary("p0", Value::inr(x))); });
  EXPECT_TRUE(check_guarded(r, f).guarded);
}

TEST(GuardTransform, BareSelfLoopOverMaybeDeadlocks) {
  BaseMonad m = BaseMonad::maybe();
  Resumption r = res(m);
  Kleisli<Tree> f(X2, YX, [r](const Value& x) { return r.eta(Value::inr(x)); });
  auto g = guard_transform(r, f);
  for (const auto& x : X2.elements()) EXPECT_EQ(g(x).out(), m.bottom());
  auto dag = iterate_res(r, f);
  for (const auto& x : X2.elements()) EXPECT_EQ(dag(x).out(), m.bottom());
}

TEST(GuardTransform, DropsTheBareLoopKeepsTheGuardedBranch) {
  BaseMonad fs = BaseMonad::finset();
  Resumption r = res(fs);
  Kleisli<Tree> f(X2, YX, [r, fs](const Value& x) {
    Tree guarded = r.iota(unary("p1", Value::inl(Value::atom("y0"))));
    return Tree::wrap(fs.join(r.eta(Value::inr(x)).out(), guarded.out()));
  });
  auto g = guard_transform(r, f);
  EXPECT_TRUE(check_guarded(r, g).guarded);
  EXPECT_EQ(render_tree(r, g(a("x0")), 2), "{(op a p1 (u {(leaf (inl y0))}))}");
}

TEST(GuardTransform, FixesGuardedMorphisms) {
  GenConfig cfg;
  Resumption r = res(BaseMonad::finset());
  std::vector<Value> tops{Value::inl(a("y0")), Value::inl(a("y1"))};
  for (std::size_t s = 0; s < 30; ++s) {
    Rng rng = sample_rng(cfg, "fixes", s);
    auto table = std::make_shared<std::map<Value, Tree>>();
    for (const auto& x : X2.elements()) table->emplace(x, gen_tree(rng, r, YX, cfg, Carrier::of("top", tops)));
    Kleisli<Tree> f(X2, YX, [table](const Value& x) { return table->at(x); });
    auto g = guard_transform(r, f);
    for (const auto& x : X2.elements()) ASSERT_TRUE(bisimilar(r, g(x), f(x), 6)) << table_text(r, f);
  }
}

TEST(SolveGuarded, NoRecursion) {
  Resumption r = res(BaseMonad::finset());
  Kleisli<Tree> f(X2, YX, [r](const Value& x) {
    return r.eta(Value::inl(x == Value::atom("x0") ? Value::atom("y1") : Value::atom("y0")));
  });
  auto dag = solve_guarded(r, f);
  EXPECT_TRUE(bisimilar(r, dag(a("x0")), r.eta(a("y1")), 6));
  EXPECT_TRUE(bisimilar(r, dag(a("x1")), r.eta(a("y0")), 6));
}

TEST(SolveGuarded, GuardedSelfCallIsAnInfiniteSpine) {
  Resumption r = res(BaseMonad::finset());
  Kleisli<Tree> f(X2, YX, [r](const Value& x) { return r.iota(unary("p0", Value::inr(x))); });
  auto dag = solve_guarded(r, f);
  EXPECT_EQ(render_tree(r, dag(a("x0")), 4), spine("p0", 4));
}

TEST(SolveGuarded, TwoStateSystem) {
  // X0 = p0.X1 + p1.X0, X1 = p0.X1
  BaseMonad fs = BaseMonad::finset();
  Resumption r = res(fs);
  Carrier N = Carrier::atoms("N", {"n0", "n1"});
  Carrier cod = Carrier::sum(Carrier::empty(), N);
  Kleisli<Tree> f(N, cod, [r, fs](const Value& n) {
    Tree to1 = r.iota(unary("p0", Value::inr(Value::atom("n1"))));
    if (n == Value::atom("n1")) return to1;
    Tree to0 = r.iota(unary("p1", Value::inr(Value::atom("n0"))));
    return Tree::wrap(fs.join(to1.out(), to0.out()));
  });
  auto dag = solve_guarded(r, f);
  EXPECT_EQ(render_tree(r, dag(a("n1")), 2), spine("p0", 2));
  EXPECT_EQ(render_tree(r, dag(a("n0")), 2),
            "{(op a p0 (u {(op a p0 (u {(cut)}))})) (op a p1 (u {(op a p0 (u {(cut)})) (op a p1 (u {(cut)}))}))}");
  // The unguarded formulation denotes the same system.
  auto unguarded = iterate_res(r, f);
  EXPECT_TRUE(bisimilar(r, unguarded(a("n0")), dag(a("n0")), 6));
}

TEST(IterateRes, ExtensionOfBaseIteration) {
  BaseMonad fs = BaseMonad::finset();
  Resumption r = res(fs);
  Kleisli<MValue> g(X2, YX, [fs](const Value& x) {
    if (x == Value::atom("x0")) return fs.eta(Value::inr(Value::atom("x1")));
    return fs.choice({Value::inl(Value::atom("y0")), Value::inr(Value::atom("x1"))});
  });
  auto dag = iterate_res(r, Kleisli<Tree>(X2, YX, [r, g](const Value& x) { return r.ext(g(x)); }));
  EXPECT_EQ(dag(a("x0")).out(), fs.eta(Value::inl(a("y0"))));
}

TEST(IterateRes, LoopWithAnOptionalWrite) {
  // f(x) = {inr x, a(p0; u ↦ inr x)}: the bare alternative is ⊥ in FinSet.
  BaseMonad fs = BaseMonad::finset();
  Resumption r = res(fs);
  Kleisli<Tree> f(X2, YX, [r, fs](const Value& x) {
    return Tree::wrap(fs.join(r.eta(Value::inr(x)).out(), r.iota(unary("p0", Value::inr(x))).out()));
  });
  EXPECT_EQ(render_tree(r, iterate_res(r, f)(a("x1")), 4), spine("p0", 4));
}

TEST(Suites, ExtensionAndGuarded) {
  GenConfig cfg;
  cfg.samples = 40;
  for (const BaseMonad& base : {BaseMonad::maybe(), BaseMonad::finset(),
                                BaseMonad::nondet_state(Carrier::atoms("S", {"s0", "s1"}))}) {
    SuiteReport ext = run_extension_suite(res(base), base.name(), cfg);
    EXPECT_TRUE(ext.ok()) << ext.text();
    SuiteReport guarded = run_guarded_suite(res(base), base.name(), cfg);
    EXPECT_TRUE(guarded.ok()) << guarded.text();
    EXPECT_EQ(guarded.axiom("guarded.fixpoint").checked, 40u);
  }
}
