#include <gtest/gtest.h>

#include <deque>
#include <set>

#include "elgot/laws.hpp"

using namespace elgot;

namespace {

Value a(const char* s) { return Value::atom(s); }

Kleisli<MValue> table(const Carrier& dom, const Carrier& cod, std::map<Value, MValue> t) {
  auto shared = std::make_shared<std::map<Value, MValue>>(std::move(t));
  return Kleisli<MValue>(dom, cod, [shared](const Value& x) { return shared->at(x); });
}

const Carrier X3 = Carrier::atoms("X", {"x0", "x1", "x2"});
const Carrier X2 = Carrier::atoms("X", {"x0", "x1"});
const Carrier Y1 = Carrier::atoms("Y", {"y"});
const Carrier Y2 = Carrier::atoms("Y", {"y1", "y2"});

/// Maybe iteration by following the unique path from x.
MValue chase_maybe(const BaseMonad& m, const Kleisli<MValue>& f, Value x) {
  std::set<Value> seen;
  while (seen.insert(x).second) {
    const MValue v = f(x);
    if (v.is_bottom()) return m.bottom();
    const Value& e = v.rows()[0][0];
    if (e.is_inl()) return m.eta(e.payload());
    x = e.payload();
  }
  return m.bottom();
}

/// Set-valued iteration by graph reachability: f†(x) collects every
/// inl-leaf reachable through inr-steps.
MValue reach_finset(const Kleisli<MValue>& f, const Value& x0) {
  std::set<Value> seen{x0}, out;
  std::deque<Value> todo{x0};
  while (!todo.empty()) {
    Value x = todo.front();
    todo.pop_front();
    const MValue fx = f(x);
    for (const auto& e : fx.rows()[0]) {
      if (e.is_inl()) {
        out.insert(e.payload());
      } else if (seen.insert(e.payload()).second) {
        todo.push_back(e.payload());
      }
    }
  }
  return MValue(MValue::Kind::finset, {std::vector<Value>(out.begin(), out.end())});
}

/// Reachability over (x, state) configurations.
MValue reach_nondet(const BaseMonad& m, const Kleisli<MValue>& f, const Value& x0) {
  const auto& states = m.states().elements();
  std::vector<std::vector<Value>> rows;
  for (const auto& s0 : states) {
    std::set<std::pair<Value, Value>> seen{{x0, s0}};
    std::deque<std::pair<Value, Value>> todo{{x0, s0}};
    std::set<Value> out;
    while (!todo.empty()) {
      auto [x, s] = todo.front();
      todo.pop_front();
      const MValue fx = f(x);
      for (const auto& e : fx.rows()[m.states().index_of(s)]) {
        const Value& v = e.first();
        const Value& s1 = e.second();
        if (v.is_inl()) {
          out.insert(Value::pair(v.payload(), s1));
        } else if (seen.insert({v.payload(), s1}).second) {
          todo.emplace_back(v.payload(), s1);
        }
      }
    }
    rows.emplace_back(out.begin(), out.end());
  }
  return MValue(MValue::Kind::nondet, std::move(rows));
}

/// Wraps a monad but replaces iteration with the constant ⊥.
struct BottomIteration {
  using value_type = MValue;
  BaseMonad m;
  MValue eta(const Value& x) const { return m.eta(x); }
  MValue bind(const MValue& v, const Cont<MValue>& k) const { return m.bind(v, k); }
  MValue map(const MValue& v, const PureFn& h) const { return m.map(v, h); }
  MValue strength(const Value& c, const MValue& v) const { return m.strength(c, v); }
  bool equal(const MValue& x, const MValue& y) const { return x == y; }
  std::string render(const MValue& v) const { return m.render(v); }
  Kleisli<MValue> iterate(const Kleisli<MValue>& f) const {
    BaseMonad base = m;
    return Kleisli<MValue>(f.dom(), f.cod().left(), [base](const Value&) { return base.bottom(); });
  }
};

/// Iteration cut off after one step: f†(x) = [η, ⊥]*(f x).
struct OneStepIteration : BottomIteration {
  Kleisli<MValue> iterate(const Kleisli<MValue>& f) const {
    BaseMonad base = m;
    return Kleisli<MValue>(f.dom(), f.cod().left(), [base, f](const Value& x) {
      return base.bind(f(x), [&](const Value& e) { return e.is_inl() ? base.eta(e.payload()) : base.bottom(); });
    });
  }
};

MValue gen_value(Rng& rng, const BottomIteration& b, const Carrier& cod, const GenConfig& cfg) {
  return elgot::gen_value(rng, b.m, cod, cfg);
}

}  // namespace

TEST(BaseMonad, RenderingForms) {
  BaseMonad maybe = BaseMonad::maybe();
  BaseMonad fs = BaseMonad::finset();
  BaseMonad nd = BaseMonad::nondet_state(Carrier::atoms("S", {"s0", "s1"}));
  EXPECT_EQ(maybe.render(maybe.bottom()), "nothing");
  EXPECT_EQ(maybe.render(maybe.eta(a("x"))), "(just x)");
  EXPECT_EQ(fs.render(fs.choice({a("b"), a("a"), a("b")})), "{a b}");
  EXPECT_EQ(fs.render(fs.bottom()), "{}");
  EXPECT_EQ(nd.render(nd.eta(a("x"))), "[s0: {x@s0}; s1: {x@s1}]");
  EXPECT_EQ(nd.name(), "nondetstateS");
}

TEST(BaseMonad, InstanceConstruction) {
  EXPECT_EQ(make_instance("maybe"), BaseMonad::maybe());
  EXPECT_EQ(make_instance("finset"), BaseMonad::finset());
  EXPECT_THROW(make_instance("nondetstate"), ConfigError);
  EXPECT_THROW(make_instance("nondetstate", Carrier::atoms("S", {})), ConfigError);
  EXPECT_THROW(make_instance("powerset"), ConfigError);
  EXPECT_THROW(BaseMonad::maybe().choice({a("x"), a("y")}), ConfigError);
}

TEST(BaseMonad, FinSetStrengthPairsPointwise) {
  BaseMonad fs = BaseMonad::finset();
  EXPECT_EQ(fs.strength(a("c"), fs.choice({a("y1"), a("y2")})),
            fs.choice({Value::pair(a("c"), a("y1")), Value::pair(a("c"), a("y2"))}));
}

TEST(BaseMonad, OrderAndJoin) {
  BaseMonad maybe = BaseMonad::maybe();
  EXPECT_TRUE(maybe.leq(maybe.bottom(), maybe.eta(a("x"))));
  EXPECT_FALSE(maybe.leq(maybe.eta(a("x")), maybe.eta(a("y"))));
  EXPECT_TRUE(maybe.leq(maybe.eta(a("x")), maybe.eta(a("x"))));
  BaseMonad fs = BaseMonad::finset();
  EXPECT_EQ(fs.join(fs.eta(a("x")), fs.eta(a("y"))), fs.choice({a("x"), a("y")}));
  EXPECT_TRUE(fs.leq(fs.eta(a("x")), fs.choice({a("x"), a("y")})));
}

TEST(BaseMonad, NondetStateThreadsTheState) {
  Carrier S = Carrier::atoms("S", {"s0", "s1"});
  BaseMonad nd = BaseMonad::nondet_state(S);
  // flip: x ↦ λs. {(x, other s)}
  MValue flip(MValue::Kind::nondet, {{Value::pair(a("x"), a("s1"))}, {Value::pair(a("x"), a("s0"))}});
  MValue twice = nd.bind(flip, [&](const Value&) { return flip; });
  EXPECT_EQ(twice, nd.eta(a("x")));
}

TEST(KleeneIterate, ThreeElementMaybeExample) {
  BaseMonad m = BaseMonad::maybe();
  Carrier cod = Carrier::sum(Y1, X3);
  auto f = table(X3, cod, {{a("x0"), m.eta(Value::inl(a("y")))},
                           {a("x1"), m.eta(Value::inr(a("x0")))},
                           {a("x2"), m.bottom()}});
  auto dag = kleene_iterate(m, f);
  EXPECT_EQ(dag(a("x0")), m.eta(a("y")));
  EXPECT_EQ(dag(a("x1")), m.eta(a("y")));
  EXPECT_EQ(dag(a("x2")), m.bottom());
  EXPECT_EQ(dag.cod(), Y1);

  auto part = partition_iterate_maybe(m, f);
  for (const auto& x : X3.elements()) EXPECT_EQ(part(x), dag(x));
}

TEST(KleeneIterate, SelfLoopIsBottomInEveryInstance) {
  for (const BaseMonad& m : {BaseMonad::maybe(), BaseMonad::finset(),
                             BaseMonad::nondet_state(Carrier::atoms("S", {"s0", "s1"}))}) {
    Kleisli<MValue> loop(X2, Carrier::sum(Y1, X2), [m](const Value& x) { return m.eta(Value::inr(x)); });
    auto dag = m.iterate(loop);
    for (const auto& x : X2.elements()) EXPECT_EQ(dag(x), m.bottom()) << m.name();
  }
}

TEST(KleeneIterate, FinSetTwoStepExample) {
  BaseMonad fs = BaseMonad::finset();
  auto f = table(X2, Carrier::sum(Y2, X2),
                 {{a("x0"), fs.eta(Value::inr(a("x1")))},
                  {a("x1"), fs.choice({Value::inl(a("y1")), Value::inl(a("y2"))})}});
  EXPECT_EQ(kleene_iterate(fs, f)(a("x0")), fs.choice({a("y1"), a("y2")}));
}

TEST(KleeneIterate, AgreesWithPathOracles) {
  GenConfig cfg;
  BaseMonad maybe = BaseMonad::maybe();
  BaseMonad fs = BaseMonad::finset();
  BaseMonad nd = BaseMonad::nondet_state(Carrier::atoms("S", {"s0", "s1"}));
  for (std::size_t s = 0; s < 200; ++s) {
    Rng rng = sample_rng(cfg, "kleene-oracle", s);
    Carrier X = gen_carrier(rng, "x", cfg);
    Carrier Y = gen_carrier(rng, "y", cfg);
    Carrier YX = Carrier::sum(Y, X);
    auto fm = gen_kleisli(rng, maybe, X, YX, cfg);
    auto ff = gen_kleisli(rng, fs, X, YX, cfg);
    auto fn = gen_kleisli(rng, nd, X, YX, cfg);
    auto dm = maybe.iterate(fm);
    auto df = fs.iterate(ff);
    auto dn = nd.iterate(fn);
    for (const auto& x : X.elements()) {
      ASSERT_EQ(dm(x), chase_maybe(maybe, fm, x)) << table_text(maybe, fm);
      ASSERT_EQ(df(x), reach_finset(ff, x)) << table_text(fs, ff);
      ASSERT_EQ(dn(x), reach_nondet(nd, fn, x)) << table_text(nd, fn);
    }
  }
}

TEST(PartitionIterate, LeafMapsLandInTheFirstLayer) {
  BaseMonad m = BaseMonad::maybe();
  Carrier cod = Carrier::sum(Y2, X2);
  Kleisli<MValue> f(X2, cod, [m](const Value& x) {
    return m.eta(Value::inl(x == Value::atom("x0") ? Value::atom("y2") : Value::atom("y1")));
  });
  auto p = partition_iterate_maybe(m, f);
  EXPECT_EQ(p(a("x0")), m.eta(a("y2")));
  EXPECT_EQ(p(a("x1")), m.eta(a("y1")));
}

TEST(PartitionIterate, CyclicPermutationDiverges) {
  BaseMonad m = BaseMonad::maybe();
  auto f = table(X3, Carrier::sum(Y1, X3),
                 {{a("x0"), m.eta(Value::inr(a("x1")))},
                  {a("x1"), m.eta(Value::inr(a("x2")))},
                  {a("x2"), m.eta(Value::inr(a("x0")))}});
  auto p = partition_iterate_maybe(m, f);
  for (const auto& x : X3.elements()) EXPECT_EQ(p(x), m.bottom());
}

TEST(PartitionIterate, RejectsOtherMonads) {
  BaseMonad fs = BaseMonad::finset();
  Kleisli<MValue> f(X2, Carrier::sum(Y1, X2), [fs](const Value& x) { return fs.eta(Value::inr(x)); });
  EXPECT_THROW(partition_iterate_maybe(fs, f), ConfigError);
}

TEST(NondetState, SingletonStateDegeneratesToFinSet) {
  GenConfig cfg;
  BaseMonad fs = BaseMonad::finset();
  Carrier S = Carrier::atoms("S", {"s"});
  BaseMonad nd = BaseMonad::nondet_state(S);
  auto lift = [&](const MValue& v) {
    std::vector<Value> row;
    for (const auto& e : v.rows()[0]) row.push_back(Value::pair(e, a("s")));
    return MValue(MValue::Kind::nondet, {row});
  };
  for (std::size_t s = 0; s < 50; ++s) {
    Rng rng = sample_rng(cfg, "singleton", s);
    Carrier X = gen_carrier(rng, "x", cfg);
    Carrier YX = Carrier::sum(gen_carrier(rng, "y", cfg), X);
    auto f = gen_kleisli(rng, fs, X, YX, cfg);
    auto g = Kleisli<MValue>(X, YX, [&](const Value& x) { return lift(f(x)); });
    auto df = fs.iterate(f);
    auto dg = nd.iterate(g);
    for (const auto& x : X.elements()) ASSERT_EQ(dg(x), lift(df(x)));
  }
}

TEST(Compose, UnitsAndBottom) {
  BaseMonad m = BaseMonad::maybe();
  GenConfig cfg;
  Rng rng = sample_rng(cfg, "compose", 0);
  auto f = gen_kleisli(rng, m, X2, Y2, cfg);
  auto left = compose_kleisli(m, unit_fn(m, Y2), f);
  auto right = compose_kleisli(m, f, unit_fn(m, X2));
  EXPECT_FALSE(first_difference(m, left, f));
  EXPECT_FALSE(first_difference(m, right, f));

  Kleisli<MValue> nothing(X2, Y2, [m](const Value&) { return m.bottom(); });
  auto composed = compose_kleisli(m, gen_kleisli(rng, m, Y2, X3, cfg), nothing);
  for (const auto& x : X2.elements()) EXPECT_EQ(composed(x), m.bottom());

  EXPECT_THROW(compose_kleisli(m, f, f), CarrierMismatch);
}

TEST(StrongIterate, IgnoringTheParameter) {
  BaseMonad fs = BaseMonad::finset();
  GenConfig cfg;
  Rng rng = sample_rng(cfg, "strong-ignore", 0);
  Carrier Z = Carrier::atoms("Z", {"z0", "z1"});
  Carrier YX = Carrier::sum(Y2, X3);
  auto g = gen_kleisli(rng, fs, X3, YX, cfg);
  Kleisli<MValue> f(Carrier::product(Z, X3), YX, [g](const Value& zx) { return g(zx.second()); });
  auto sd = strong_iterate(fs, f);
  auto gd = fs.iterate(g);
  for (const auto& zx : sd.dom().elements()) EXPECT_EQ(sd(zx), gd(zx.second()));
}

TEST(StrongIterate, ImmediateExit) {
  BaseMonad maybe = BaseMonad::maybe();
  Carrier Z = Carrier::atoms("Z", {"z0", "z1"});
  Carrier ZX = Carrier::product(Z, X2);
  Kleisli<MValue> f(ZX, Carrier::sum(ZX, X2), [maybe](const Value& zx) { return maybe.eta(Value::inl(zx)); });
  auto sd = strong_iterate(maybe, f);
  for (const auto& zx : ZX.elements()) EXPECT_EQ(sd(zx), maybe.eta(zx));
}

TEST(StrongIterate, MaybeTwoByTwoOracle) {
  // Hand-unrolled: the loop keeps z fixed and moves through X.
  BaseMonad m = BaseMonad::maybe();
  Carrier Z = Carrier::atoms("Z", {"z0", "z1"});
  Carrier ZX = Carrier::product(Z, X2);
  Carrier YX = Carrier::sum(Y2, X2);
  auto p = [](const char* z, const char* x) { return Value::pair(Value::atom(z), Value::atom(x)); };
  auto f = table(ZX, YX,
                 {{p("z0", "x0"), m.eta(Value::inr(a("x1")))},
                  {p("z0", "x1"), m.eta(Value::inl(a("y1")))},
                  {p("z1", "x0"), m.eta(Value::inr(a("x1")))},
                  {p("z1", "x1"), m.eta(Value::inr(a("x0")))}});
  auto sd = strong_iterate(m, f);
  EXPECT_EQ(sd(p("z0", "x0")), m.eta(a("y1")));
  EXPECT_EQ(sd(p("z0", "x1")), m.eta(a("y1")));
  EXPECT_EQ(sd(p("z1", "x0")), m.bottom());
  EXPECT_EQ(sd(p("z1", "x1")), m.bottom());
}

TEST(Bekic, HoldsOnRandomPairs) {
  GenConfig cfg;
  for (const BaseMonad& m : {BaseMonad::maybe(), BaseMonad::finset()}) {
    for (std::size_t s = 0; s < 100; ++s) {
      Rng rng = sample_rng(cfg, "bekic-" + m.name(), s);
      Carrier Z = gen_carrier(rng, "z", cfg), Y = gen_carrier(rng, "y", cfg), X = gen_carrier(rng, "x", cfg);
      Carrier cod = Carrier::sum(Carrier::sum(Z, Y), X);
      auto f = gen_kleisli(rng, m, Y, cod, cfg);
      auto g = gen_kleisli(rng, m, X, cod, cfg);
      CheckReport rep = check_bekic(m, f, g);
      ASSERT_TRUE(rep.ok()) << m.name() << ": " << rep.failures.front();
    }
  }
}

// Both sides of the identity collapse to ⊥ when every iterate is ⊥, so this
// mutant passes Bekić; the unfolding axiom is what rejects it.
TEST(Bekic, ConstantBottomIterationSatisfiesItVacuously) {
  GenConfig cfg;
  BottomIteration broken{BaseMonad::finset()};
  for (std::size_t s = 0; s < 100; ++s) {
    Rng rng = sample_rng(cfg, "bekic-mutant", s);
    Carrier Z = gen_carrier(rng, "z", cfg), Y = gen_carrier(rng, "y", cfg), X = gen_carrier(rng, "x", cfg);
    Carrier cod = Carrier::sum(Carrier::sum(Z, Y), X);
    auto f = gen_kleisli(rng, broken.m, Y, cod, cfg);
    auto g = gen_kleisli(rng, broken.m, X, cod, cfg);
    ASSERT_TRUE(check_bekic(broken, f, g).ok());
  }
}

TEST(Bekic, OneStepIterationIsCaught) {
  GenConfig cfg;
  OneStepIteration broken{BaseMonad::finset()};
  std::size_t failures = 0;
  for (std::size_t s = 0; s < 100; ++s) {
    Rng rng = sample_rng(cfg, "bekic-mutant", s);
    Carrier Z = gen_carrier(rng, "z", cfg), Y = gen_carrier(rng, "y", cfg), X = gen_carrier(rng, "x", cfg);
    Carrier cod = Carrier::sum(Carrier::sum(Z, Y), X);
    auto f = gen_kleisli(rng, broken.m, Y, cod, cfg);
    auto g = gen_kleisli(rng, broken.m, X, cod, cfg);
    failures += check_bekic(broken, f, g).failures.size();
  }
  EXPECT_GE(failures, 1u);
}

TEST(AxiomSuite, BaseInstancesPass) {
  GenConfig cfg;
  cfg.samples = 50;
  for (const BaseMonad& m : {BaseMonad::maybe(), BaseMonad::finset(),
                             BaseMonad::nondet_state(Carrier::atoms("S", {"s0", "s1"}))}) {
    SuiteReport rep = run_axiom_suite(m, m.name(), cfg);
    EXPECT_TRUE(rep.ok()) << rep.text();
    SuiteReport cont = run_continuity_suite(m, m.name(), cfg);
    EXPECT_TRUE(cont.ok()) << cont.text();
  }
}

TEST(AxiomSuite, BottomIterationFailsTheAxioms) {
  GenConfig cfg;
  cfg.samples = 30;
  SuiteReport rep = run_axiom_suite(BottomIteration{BaseMonad::finset()}, "mutant", cfg);
  EXPECT_GT(rep.axiom("iter.unfolding").failed, 0u);
}
