#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "elgot/handler.hpp"
#include "elgot/resumption_iteration.hpp"

namespace elgot {

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

struct GenConfig {
  std::uint64_t seed = 42;
  std::size_t max_carrier = 3;
  /// Upper bound on operation nodes per generated tree; 0 gives leaf-only trees.
  std::size_t node_budget = 15;
  /// Bisimulation depth for resumption equality.
  std::size_t depth = 6;
  std::size_t samples = 100;
  /// Maximal size of a generated set (FinSet rows, NondetState rows).
  std::size_t branch = 2;
  /// Whether generated trees may refer back to an enclosing node.
  bool back_edges = true;
};

/// Deterministic generator; `below` avoids library distributions so that
/// streams agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool chance(std::size_t num, std::size_t den) { return below(den) < num; }

 private:
  std::mt19937_64 engine_;
};

/// Independent stream for one sample of one named check.
Rng sample_rng(const GenConfig& cfg, std::string_view stream, std::size_t sample);

/// Carrier `prefix0 .. prefix{n-1}` with `min <= n <= max_carrier`.
Carrier gen_carrier(Rng& rng, const std::string& prefix, const GenConfig& cfg, std::size_t min = 1);

/// Random pure map between carriers (`cod` nonempty).
PureFn gen_pure(Rng& rng, const Carrier& dom, const Carrier& cod);

/// Random base value over elements drawn by `element`.
MValue gen_base(Rng& rng, const BaseMonad& m, const std::function<Value(Rng&)>& element, const GenConfig& cfg);

MValue gen_value(Rng& rng, const BaseMonad& m, const Carrier& cod, const GenConfig& cfg);

/// Random tree over `cod`; leaves of the top layer are restricted to
/// `top` when given.
Tree gen_tree(Rng& rng, const Resumption& r, const Carrier& cod, const GenConfig& cfg,
              const std::optional<Carrier>& top = std::nullopt);

inline Tree gen_value(Rng& rng, const Resumption& r, const Carrier& cod, const GenConfig& cfg) {
  return gen_tree(rng, r, cod, cfg);
}

/// Random total Kleisli function, tabulated in enumeration order.
template <ElgotMonad M>
Kleisli<ValueOf<M>> gen_kleisli(Rng& rng, const M& m, const Carrier& dom, const Carrier& cod,
                                const GenConfig& cfg) {
  auto table = std::make_shared<std::map<Value, ValueOf<M>>>();
  for (const auto& x : dom.elements()) table->emplace(x, gen_value(rng, m, cod, cfg));
  return Kleisli<ValueOf<M>>(dom, cod, [table](const Value& x) { return table->at(x); });
}

/// Two-operation signature used by the resumption suites:
/// `a : {p0,p1} × X -> X` and `b : {q} × X^{l,r} -> X`.
Signature test_signature();

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct AxiomResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string counterexample;
};

struct SuiteReport {
  std::string suite;
  std::string instance;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<AxiomResult> results;

  AxiomResult& axiom(const std::string& name);
  /// Counts one check; `witness` is rendered for the first failure only.
  void record(const std::string& name, bool ok, const std::function<std::string()>& witness);
  void merge(const SuiteReport& other);

  std::size_t failures() const;
  bool ok() const { return failures() == 0; }
  std::string text() const;
  std::string to_json() const;
};

// ---------------------------------------------------------------------------
// Generic axiom suite
// ---------------------------------------------------------------------------

template <ElgotMonad M>
std::string table_text(const M& m, const Kleisli<ValueOf<M>>& f) {
  std::string out;
  for (const auto& x : f.dom().elements()) {
    if (!out.empty()) out += "; ";
    out += x.to_string() + " -> " + m.render(f(x));
  }
  return out;
}

/// First point where `lhs` and `rhs` differ, rendered, or nothing.
template <ElgotMonad M, class L, class R>
std::optional<std::string> compare_on(const M& m, const Carrier& dom, L&& lhs, R&& rhs) {
  for (const auto& x : dom.elements()) {
    auto a = lhs(x);
    auto b = rhs(x);
    if (!m.equal(a, b)) {
      return "at " + x.to_string() + ": lhs " + m.render(a) + " rhs " + m.render(b);
    }
  }
  return std::nullopt;
}

namespace detail {

inline Value inl_of(const Value& v) { return Value::inl(v); }
inline Value inr_of(const Value& v) { return Value::inr(v); }

template <ElgotMonad M>
void record_cmp(SuiteReport& rep, const std::string& name, const std::optional<std::string>& diff,
                const std::function<std::string()>& tables) {
  rep.record(name, !diff, [&] { return *diff + " | " + tables(); });
}

}  // namespace detail

/// Monad laws, strength laws, the iteration axioms, strength compatibility,
/// Bekić, strong iteration and divergence on `cfg.samples` random samples.
template <ElgotMonad M>
SuiteReport run_axiom_suite(const M& m, const std::string& instance, const GenConfig& cfg) {
  using V = ValueOf<M>;
  SuiteReport rep;
  rep.suite = "axioms";
  rep.instance = instance;
  rep.seed = cfg.seed;
  rep.samples = cfg.samples;

  auto ret = [&m](const Value& x) { return m.eta(x); };

  for (std::size_t s = 0; s < cfg.samples; ++s) {
    Rng rng = sample_rng(cfg, "axioms/" + instance, s);
    const Carrier X = gen_carrier(rng, "x", cfg);
    const Carrier Y = gen_carrier(rng, "y", cfg);
    const Carrier Z = gen_carrier(rng, "z", cfg);
    const Carrier C = gen_carrier(rng, "c", cfg);
    const Carrier YX = Carrier::sum(Y, X);

    // Monad laws.
    {
      auto f = gen_kleisli(rng, m, X, Y, cfg);
      auto g = gen_kleisli(rng, m, Y, Z, cfg);
      auto t = gen_kleisli(rng, m, Z, X, cfg);
      auto tables = [&] { return "t: " + table_text(m, t) + " | f: " + table_text(m, f) + " | g: " + table_text(m, g); };
      detail::record_cmp<M>(rep, "monad.right_unit",
                            compare_on(m, Z, [&](const Value& z) { return m.bind(t(z), ret); },
                                       [&](const Value& z) { return t(z); }),
                            tables);
      detail::record_cmp<M>(rep, "monad.left_unit",
                            compare_on(m, X, [&](const Value& x) { return m.bind(m.eta(x), f.as_cont()); },
                                       [&](const Value& x) { return f(x); }),
                            tables);
      detail::record_cmp<M>(
          rep, "monad.assoc",
          compare_on(m, Z, [&](const Value& z) { return m.bind(m.bind(t(z), f.as_cont()), g.as_cont()); },
                     [&](const Value& z) {
                       return m.bind(t(z), [&](const Value& x) { return m.bind(f(x), g.as_cont()); });
                     }),
          tables);
    }

    // Strength laws.
    {
      auto t = gen_kleisli(rng, m, X, Y, cfg);
      auto f = gen_kleisli(rng, m, Y, Z, cfg);
      const Carrier CX = Carrier::product(C, X);
      const Carrier CCX = Carrier::product(Carrier::product(C, Z), X);
      auto tables = [&] { return "t: " + table_text(m, t) + " | f: " + table_text(m, f); };
      detail::record_cmp<M>(
          rep, "strength.str1",
          compare_on(m, CX,
                     [&](const Value& p) {
                       return m.map(m.strength(p.first(), t(p.second())), [](const Value& q) { return q.second(); });
                     },
                     [&](const Value& p) { return t(p.second()); }),
          tables);
      detail::record_cmp<M>(rep, "strength.str2",
                            compare_on(m, CCX,
                                       [&](const Value& p) {
                                         return m.map(m.strength(p.first(), t(p.second())), [](const Value& q) {
                                           const Value& cz = q.first();
                                           return Value::pair(cz.first(), Value::pair(cz.second(), q.second()));
                                         });
                                       },
                                       [&](const Value& p) {
                                         const Value& cz = p.first();
                                         return m.strength(cz.first(), m.strength(cz.second(), t(p.second())));
                                       }),
                            tables);
      detail::record_cmp<M>(rep, "strength.str3",
                            compare_on(m, CX, [&](const Value& p) { return m.strength(p.first(), m.eta(p.second())); },
                                       [&](const Value& p) { return m.eta(p); }),
                            tables);
      detail::record_cmp<M>(
          rep, "strength.str4",
          compare_on(m, CX,
                     [&](const Value& p) { return m.strength(p.first(), m.bind(t(p.second()), f.as_cont())); },
                     [&](const Value& p) {
                       return m.bind(m.strength(p.first(), t(p.second())),
                                     [&](const Value& q) { return m.strength(q.first(), f(q.second())); });
                     }),
          tables);
    }

    // Iteration axioms.
    {
      auto f = gen_kleisli(rng, m, X, YX, cfg);
      auto f_dag = m.iterate(f);
      auto tables = [&] { return "f: " + table_text(m, f); };
      detail::record_cmp<M>(rep, "iter.unfolding",
                            compare_on(m, X,
                                       [&](const Value& x) {
                                         return m.bind(f(x), [&](const Value& e) {
                                           return e.is_inl() ? m.eta(e.payload()) : f_dag(e.payload());
                                         });
                                       },
                                       [&](const Value& x) { return f_dag(x); }),
                            tables);

      auto g = gen_kleisli(rng, m, Y, Z, cfg);
      Kleisli<V> nat(X, Carrier::sum(Z, X), [&m, f, g](const Value& x) {
        return m.bind(f(x), [&](const Value& e) {
          return e.is_inl() ? m.map(g(e.payload()), detail::inl_of) : m.eta(e);
        });
      });
      auto nat_dag = m.iterate(nat);
      detail::record_cmp<M>(rep, "iter.naturality",
                            compare_on(m, X, [&](const Value& x) { return m.bind(f_dag(x), g.as_cont()); },
                                       [&](const Value& x) { return nat_dag(x); }),
                            [&] { return tables() + " | g: " + table_text(m, g); });
    }
    {
      // g : X -> T(Y+Z), h : Z -> T(Y+X)
      auto g = gen_kleisli(rng, m, X, Carrier::sum(Y, Z), cfg);
      auto h = gen_kleisli(rng, m, Z, YX, cfg);
      Kleisli<V> lhs_step(X, YX, [&m, g, h](const Value& x) {
        return m.bind(g(x), [&](const Value& e) { return e.is_inl() ? m.eta(e) : h(e.payload()); });
      });
      Kleisli<V> rhs_step(Z, Carrier::sum(Y, Z), [&m, g, h](const Value& z) {
        return m.bind(h(z), [&](const Value& e) { return e.is_inl() ? m.eta(e) : g(e.payload()); });
      });
      auto lhs = m.iterate(lhs_step);
      auto rhs_dag = m.iterate(rhs_step);
      detail::record_cmp<M>(rep, "iter.dinaturality",
                            compare_on(m, X, [&](const Value& x) { return lhs(x); },
                                       [&](const Value& x) {
                                         return m.bind(g(x), [&](const Value& e) {
                                           return e.is_inl() ? m.eta(e.payload()) : rhs_dag(e.payload());
                                         });
                                       }),
                            [&] { return "g: " + table_text(m, g) + " | h: " + table_text(m, h); });
    }
    {
      // g : X -> T((Y+X)+X)
      auto g = gen_kleisli(rng, m, X, Carrier::sum(YX, X), cfg);
      Kleisli<V> merged(X, YX, [&m, g](const Value& x) {
        return m.map(g(x), [](const Value& e) { return e.is_inl() ? e.payload() : e; });
      });
      auto lhs = m.iterate(merged);
      auto rhs = m.iterate(m.iterate(g));
      detail::record_cmp<M>(rep, "iter.codiagonal",
                            compare_on(m, X, [&](const Value& x) { return lhs(x); },
                                       [&](const Value& x) { return rhs(x); }),
                            [&] { return "g: " + table_text(m, g); });
    }
    {
      // f ∘ h = T(id + h) ∘ g  with h : W -> X onto; g built through a section of h.
      const Carrier W = Carrier::numbered("W", "w", X.size() + rng.below(2));
      std::vector<Value> sec;
      std::map<Value, Value> h_map;
      for (std::size_t i = 0; i < W.size(); ++i) {
        Value x = i < X.size() ? X.elements()[i] : X.elements()[rng.below(X.size())];
        h_map.emplace(W.elements()[i], x);
      }
      std::map<Value, Value> s_map;
      for (const auto& [w, x] : h_map) {
        if (!s_map.count(x) || rng.chance(1, 2)) s_map.insert_or_assign(x, w);
      }
      auto f = gen_kleisli(rng, m, X, YX, cfg);
      Kleisli<V> g(W, Carrier::sum(Y, W), [&m, f, h_map, s_map](const Value& w) {
        return m.map(f(h_map.at(w)), [&](const Value& e) {
          return e.is_inl() ? e : Value::inr(s_map.at(e.payload()));
        });
      });
      auto f_dag = m.iterate(f);
      auto g_dag = m.iterate(g);
      detail::record_cmp<M>(rep, "iter.uniformity",
                            compare_on(m, W, [&](const Value& w) { return f_dag(h_map.at(w)); },
                                       [&](const Value& w) { return g_dag(w); }),
                            [&] { return "f: " + table_text(m, f); });
    }
    {
      // τ ∘ (id × f†) = (T dist ∘ τ ∘ (id × f))†
      auto f = gen_kleisli(rng, m, X, YX, cfg);
      auto f_dag = m.iterate(f);
      const Carrier CX = Carrier::product(C, X);
      Kleisli<V> step(CX, Carrier::sum(Carrier::product(C, Y), CX), [&m, f](const Value& p) {
        return m.map(m.strength(p.first(), f(p.second())), distribute);
      });
      auto rhs = m.iterate(step);
      detail::record_cmp<M>(rep, "iter.strength",
                            compare_on(m, CX, [&](const Value& p) { return m.strength(p.first(), f_dag(p.second())); },
                                       [&](const Value& p) { return rhs(p); }),
                            [&] { return "f: " + table_text(m, f); });
    }
    {
      // Strong iteration keeps the parameter fixed around the loop.
      auto f = gen_kleisli(rng, m, Carrier::product(C, X), YX, cfg);
      auto strong = strong_iterate(m, f);
      bool ok = true;
      std::string witness;
      for (const auto& c : C.elements()) {
        Kleisli<V> fc(X, YX, [f, c](const Value& x) { return f(Value::pair(c, x)); });
        auto fc_dag = m.iterate(fc);
        for (const auto& x : X.elements()) {
          auto a = strong(Value::pair(c, x));
          auto b = fc_dag(x);
          if (ok && !m.equal(a, b)) {
            ok = false;
            witness = "at (" + c.to_string() + ", " + x.to_string() + "): " + m.render(a) + " vs " + m.render(b) +
                      " | f: " + table_text(m, f);
          }
        }
      }
      rep.record("iter.strong", ok, [&] { return witness; });
    }
    {
      // Bekić with f : Y -> T((Z+Y)+X) and g : X -> T((Z+Y)+X).
      const Carrier ZYX = Carrier::sum(Carrier::sum(Z, Y), X);
      auto f = gen_kleisli(rng, m, Y, ZYX, cfg);
      auto g = gen_kleisli(rng, m, X, ZYX, cfg);
      CheckReport b = check_bekic(m, f, g);
      rep.record("bekic", b.ok(), [&] {
        return b.failures.front() + " | f: " + table_text(m, f) + " | g: " + table_text(m, g);
      });
    }
    {
      // ⊥ = (η ∘ inr)†: constant, coconstant, and reached by every pure loop.
      Kleisli<V> loop_x(X, YX, [&m](const Value& x) { return m.eta(Value::inr(x)); });
      Kleisli<V> loop_w(Z, Carrier::sum(Y, Z), [&m](const Value& z) { return m.eta(Value::inr(z)); });
      auto bot_x = m.iterate(loop_x);
      auto bot_w = m.iterate(loop_w);
      PureFn u = gen_pure(rng, Z, X);
      detail::record_cmp<M>(rep, "divergence.constant",
                            compare_on(m, Z, [&](const Value& z) { return bot_x(u(z)); },
                                       [&](const Value& z) { return bot_w(z); }),
                            [] { return std::string("pure map"); });
      auto h = gen_kleisli(rng, m, Y, C, cfg);
      Kleisli<V> loop_c(X, Carrier::sum(C, X), [&m](const Value& x) { return m.eta(Value::inr(x)); });
      auto bot_c = m.iterate(loop_c);
      detail::record_cmp<M>(rep, "divergence.coconstant",
                            compare_on(m, X, [&](const Value& x) { return m.bind(bot_x(x), h.as_cont()); },
                                       [&](const Value& x) { return bot_c(x); }),
                            [&] { return "h: " + table_text(m, h); });
      PureFn perm = gen_pure(rng, X, X);
      Kleisli<V> e(X, YX, [&m, perm](const Value& x) { return m.eta(Value::inr(perm(x))); });
      auto e_dag = m.iterate(e);
      detail::record_cmp<M>(rep, "divergence.loop",
                            compare_on(m, X, [&](const Value& x) { return e_dag(x); },
                                       [&](const Value& x) { return bot_x(x); }),
                            [] { return std::string("pure loop"); });
      if constexpr (requires { m.bottom(); }) {
        detail::record_cmp<M>(rep, "divergence.least",
                              compare_on(m, X, [&](const Value& x) { return bot_x(x); },
                                         [&](const Value&) { return m.bottom(); }),
                              [] { return std::string(); });
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Specialised suites
// ---------------------------------------------------------------------------

/// Order-theoretic properties of an ω-continuous base monad: monotonicity
/// of composition and copairing along sampled chains, and strict strength.
SuiteReport run_continuity_suite(const BaseMonad& m, const std::string& instance, const GenConfig& cfg);

/// Equations of the resumption monad structure checked against independent
/// truncation-level oracles.
SuiteReport run_structure_suite(const Resumption& r, const std::string& instance, const GenConfig& cfg);

/// `out ∘ f = T inl ∘ g  ⇒  out ∘ f† = T inl ∘ g†` on constructed pairs.
SuiteReport run_extension_suite(const Resumption& r, const std::string& instance, const GenConfig& cfg);

/// Guarded solutions, ‡ on guarded inputs and its idempotence.
SuiteReport run_guarded_suite(const Resumption& r, const std::string& instance, const GenConfig& cfg);

/// Partition iteration against Kleene iteration on Maybe: random samples
/// plus every `f` for `|X| = |Y| = 2`.
SuiteReport run_partition_suite(const GenConfig& cfg);

/// The four morphism laws for `ext : T -> T_Σ`.
SuiteReport run_ext_morphism_suite(const Resumption& r, const std::string& instance, const GenConfig& cfg);

/// The four morphism laws for a base morphism `σ`.
SuiteReport run_sigma_morphism_suite(const MonadMorphism& sigma, const std::string& instance, const GenConfig& cfg);

/// Configuration of a handler suite: source monad and target morphism.
struct HandlerSetup {
  std::string name;
  BaseMonad source;
  BaseMonad target;
  /// Use a collapsing map in place of `σ` (mutation check).
  bool mutate_sigma = false;
};

/// Universal triangles, fuel monotonicity, the structural fold oracle and
/// the morphism laws of `ξ` on converged samples; `fuel` is the evaluation
/// budget.
SuiteReport run_handler_suite(const HandlerSetup& setup, const GenConfig& cfg, std::size_t fuel = 10);

/// Standard handler configurations.
std::vector<HandlerSetup> handler_setups();

/// Identities every suite run must cover.
const std::vector<std::string>& identity_checklist();

/// Suites by name with the identities they cover.
struct SuiteInfo {
  std::string name;
  std::vector<std::string> identities;
};
const std::vector<SuiteInfo>& suite_registry();

/// Throws Error listing any checklist identity not covered by the registry.
void verify_registry();

/// Runs one registered suite (or `all`) over every instance it applies to.
std::vector<SuiteReport> run_named_suite(const std::string& name, const GenConfig& cfg);

}  // namespace elgot
