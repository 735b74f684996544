#include "elgot/laws.hpp"

#include <set>
#include <sstream>

#include <json.hpp>

namespace elgot {

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

Rng sample_rng(const GenConfig& cfg, std::string_view stream, std::size_t sample) {
  return Rng(splitmix(splitmix(cfg.seed ^ fnv1a(stream)) + sample));
}

Carrier gen_carrier(Rng& rng, const std::string& prefix, const GenConfig& cfg, std::size_t min) {
  std::size_t hi = std::max(min, cfg.max_carrier);
  std::size_t n = min + rng.below(hi - min + 1);
  return Carrier::numbered(prefix, prefix, n);
}

PureFn gen_pure(Rng& rng, const Carrier& dom, const Carrier& cod) {
  if (cod.size() == 0) throw ConfigError("pure map into the empty carrier " + cod.name());
  auto table = std::make_shared<std::map<Value, Value>>();
  for (const auto& x : dom.elements()) table->emplace(x, cod.elements()[rng.below(cod.size())]);
  return [table](const Value& x) { return table->at(x); };
}

MValue gen_base(Rng& rng, const BaseMonad& m, const std::function<Value(Rng&)>& element, const GenConfig& cfg) {
  auto row_size = [&] { return rng.chance(1, 6) ? 0 : 1 + rng.below(std::max<std::size_t>(cfg.branch, 1)); };
  switch (m.kind()) {
    case MValue::Kind::maybe:
      return rng.chance(1, 5) ? m.bottom() : m.eta(element(rng));
    case MValue::Kind::finset: {
      std::vector<Value> xs;
      for (std::size_t n = row_size(); n > 0; --n) xs.push_back(element(rng));
      return MValue(MValue::Kind::finset, {xs});
    }
    case MValue::Kind::nondet: {
      const auto& states = m.states().elements();
      std::vector<std::vector<Value>> rows;
      for (std::size_t s = 0; s < states.size(); ++s) {
        std::vector<Value> row;
        for (std::size_t n = row_size(); n > 0; --n) {
          Value x = element(rng);
          row.push_back(Value::pair(x, states[rng.below(states.size())]));
        }
        rows.push_back(std::move(row));
      }
      return MValue(MValue::Kind::nondet, std::move(rows));
    }
  }
  return m.bottom();
}

MValue gen_value(Rng& rng, const BaseMonad& m, const Carrier& cod, const GenConfig& cfg) {
  if (cod.size() == 0) return m.bottom();
  return gen_base(rng, m, [&cod](Rng& g) { return cod.elements()[g.below(cod.size())]; }, cfg);
}

Tree gen_tree(Rng& rng, const Resumption& r, const Carrier& cod, const GenConfig& cfg,
              const std::optional<Carrier>& top) {
  const auto& ops = r.signature().ops();
  std::size_t budget = cfg.node_budget;
  std::vector<Tree> ancestors;
  std::function<Tree(bool)> grow = [&](bool is_top) -> Tree {
    auto slot = std::make_shared<MValue>();
    Tree t = Tree::suspend([slot] { return *slot; });
    ancestors.push_back(t);
    const Carrier& leaves = is_top && top ? *top : cod;
    auto element = [&](Rng& g) -> Value {
      bool op_node = budget > 0 && !ops.empty() && (leaves.size() == 0 || g.chance(1, 2));
      if (!op_node) {
        if (leaves.size() == 0) throw ConfigError("cannot generate a leaf in " + leaves.name());
        return Value::inl(leaves.elements()[g.below(leaves.size())]);
      }
      --budget;
      const OpDesc& op = ops[g.below(ops.size())];
      Value param = op.param.elements()[g.below(op.param.size())];
      Value::Children ch;
      for (const auto& k : op.arity.elements()) {
        Tree c = cfg.back_edges && g.chance(1, 8) ? ancestors[g.below(ancestors.size())] : grow(false);
        ch.emplace_back(k, c.as_value());
      }
      return Value::inr(Value::op(op.name, param, std::move(ch)));
    };
    *slot = gen_base(rng, r.base(), element, cfg);
    ancestors.pop_back();
    return t;
  };
  return grow(true);
}

Signature test_signature() {
  return Signature({{"a", Carrier::atoms("A", {"p0", "p1"}), Carrier::atoms("U", {"u"})},
                    {"b", Carrier::atoms("B", {"q"}), Carrier::atoms("LR", {"l", "r"})}});
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

AxiomResult& SuiteReport::axiom(const std::string& name) {
  for (auto& r : results) {
    if (r.name == name) return r;
  }
  results.push_back(AxiomResult{name, 0, 0, {}});
  return results.back();
}

void SuiteReport::record(const std::string& name, bool ok, const std::function<std::string()>& witness) {
  AxiomResult& r = axiom(name);
  ++r.checked;
  if (!ok) {
    ++r.failed;
    if (r.counterexample.empty()) r.counterexample = witness();
  }
}

void SuiteReport::merge(const SuiteReport& other) {
  for (const auto& o : other.results) {
    AxiomResult& r = axiom(o.name);
    r.checked += o.checked;
    r.failed += o.failed;
    if (r.counterexample.empty()) r.counterexample = o.counterexample;
  }
}

std::size_t SuiteReport::failures() const {
  std::size_t n = 0;
  for (const auto& r : results) n += r.failed;
  return n;
}

std::string SuiteReport::text() const {
  std::ostringstream out;
  out << suite << " [" << instance << "] seed=" << seed << " samples=" << samples << "\n";
  for (const auto& r : results) {
    out << "  " << (r.failed ? "FAIL " : "ok   ") << r.name << " " << (r.checked - r.failed) << "/" << r.checked
        << "\n";
    if (r.failed) out << "       counterexample: " << r.counterexample << "\n";
  }
  return out.str();
}

std::string SuiteReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["suite"] = suite;
  doc["instance"] = instance;
  doc["seed"] = seed;
  doc["samples"] = samples;
  doc["results"] = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json a;
    a["name"] = r.name;
    a["checked"] = r.checked;
    a["failed"] = r.failed;
    if (r.failed) a["counterexample"] = r.counterexample;
    doc["results"].push_back(a);
  }
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Continuity
// ---------------------------------------------------------------------------

namespace {

/// A value above `v` in the hom order.
MValue enlarge(Rng& rng, const BaseMonad& m, const MValue& v, const Carrier& cod, const GenConfig& cfg) {
  MValue extra = gen_value(rng, m, cod, cfg);
  if (m.kind() == MValue::Kind::maybe) return v.is_bottom() ? extra : v;
  return m.join(v, extra);
}

}  // namespace

SuiteReport run_continuity_suite(const BaseMonad& m, const std::string& instance, const GenConfig& cfg) {
  SuiteReport rep;
  rep.suite = "continuity";
  rep.instance = instance;
  rep.seed = cfg.seed;
  rep.samples = cfg.samples;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    Rng rng = sample_rng(cfg, "continuity/" + instance, s);
    const Carrier X = gen_carrier(rng, "x", cfg);
    const Carrier Y = gen_carrier(rng, "y", cfg);
    const Carrier Z = gen_carrier(rng, "z", cfg);
    auto f = gen_kleisli(rng, m, X, Y, cfg);
    auto g = gen_kleisli(rng, m, Y, Z, cfg);
    std::map<Value, MValue> f_up, g_up;
    for (const auto& x : X.elements()) f_up.emplace(x, enlarge(rng, m, f(x), Y, cfg));
    for (const auto& y : Y.elements()) g_up.emplace(y, enlarge(rng, m, g(y), Z, cfg));

    bool mono = true;
    for (const auto& x : X.elements()) {
      MValue lo = m.bind(f(x), g.as_cont());
      MValue mid = m.bind(f_up.at(x), g.as_cont());
      MValue hi = m.bind(f_up.at(x), [&](const Value& y) { return g_up.at(y); });
      if (!m.leq(lo, mid) || !m.leq(mid, hi)) mono = false;
    }
    rep.record("continuity.compose_monotone", mono, [&] { return "f: " + table_text(m, f) + " | g: " + table_text(m, g); });

    auto h = gen_kleisli(rng, m, Z, Y, cfg);
    Kleisli<MValue> cp = copair(f, h);
    Kleisli<MValue> cp_up = copair(Kleisli<MValue>(X, Y, [&f_up](const Value& x) { return f_up.at(x); }), h);
    bool cmono = true;
    for (const auto& v : cp.dom().elements()) {
      if (!m.leq(cp(v), cp_up(v))) cmono = false;
    }
    rep.record("continuity.copair_monotone", cmono, [&] { return "f: " + table_text(m, f); });

    const Value c = Value::atom("c0");
    rep.record("continuity.strength_bottom", m.strength(c, m.bottom()) == m.bottom(),
               [&] { return m.render(m.strength(c, m.bottom())); });
    rep.record("continuity.bind_bottom", m.bind(m.bottom(), g.as_cont()) == m.bottom(),
               [&] { return m.render(m.bind(m.bottom(), g.as_cont())); });

    // The Kleene chain ascends and its limit is the iterate.
    auto loop = gen_kleisli(rng, m, X, Carrier::sum(Y, X), cfg);
    auto dag = m.iterate(loop);
    std::map<Value, MValue> approx;
    for (const auto& x : X.elements()) approx.emplace(x, m.bottom());
    bool chain = true;
    for (std::size_t step = 0; step < 64; ++step) {
      std::map<Value, MValue> next;
      for (const auto& x : X.elements()) {
        next.emplace(x, m.bind(loop(x), [&](const Value& e) {
          return e.is_inl() ? m.eta(e.payload()) : approx.at(e.payload());
        }));
        if (!m.leq(approx.at(x), next.at(x))) chain = false;
      }
      if (next == approx) break;
      approx = std::move(next);
    }
    for (const auto& x : X.elements()) {
      if (approx.at(x) != dag(x)) chain = false;
    }
    rep.record("continuity.kleene_chain", chain, [&] { return "f: " + table_text(m, loop); });
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Resumption structure
// ---------------------------------------------------------------------------

namespace {

Value truncated_op(const Value& op, const std::function<MValue(const Tree&)>& below) {
  Value::Children ch;
  for (const auto& [k, c] : op.children()) ch.emplace_back(k, Value::layer(below(Tree::from_value(c))));
  return op.with_children(std::move(ch));
}

/// Truncation of `f‡‡(t)` computed by direct recursion on `t`.
MValue oracle_bind(const Resumption& r, const Tree& t, const Kleisli<Tree>& f, std::size_t d) {
  const BaseMonad& base = r.base();
  return base.bind(t.out(), [&](const Value& e) {
    if (e.is_inl()) return truncate(r, f(e.payload()), d);
    if (d == 0) return base.eta(Value::cut());
    return base.eta(truncated_op(e.payload(), [&](const Tree& c) { return oracle_bind(r, c, f, d - 1); }));
  });
}

/// Truncation of `τ^ν(c, t)` computed by direct recursion on `t`.
MValue oracle_strength(const Resumption& r, const Value& c, const Tree& t, std::size_t d) {
  return r.base().map(t.out(), [&](const Value& e) {
    if (e.is_inl()) return Value::inl(Value::pair(c, e.payload()));
    if (d == 0) return Value::cut();
    return truncated_op(e.payload(), [&](const Tree& k) { return oracle_strength(r, c, k, d - 1); });
  });
}

/// Cuts a truncation further down to `d` layers.
MValue recut(const BaseMonad& base, const MValue& layer, std::size_t d) {
  return base.map(layer, [&](const Value& e) {
    if (e.is_inl() || e.is(Value::Kind::cut)) return e;
    if (d == 0) return Value::cut();
    Value::Children ch;
    for (const auto& [k, c] : e.children()) ch.emplace_back(k, Value::layer(recut(base, c.layer_value(), d - 1)));
    return e.with_children(std::move(ch));
  });
}

Value gen_op(Rng& rng, const Signature& sig, const Carrier& children) {
  const OpDesc& op = sig.ops()[rng.below(sig.ops().size())];
  Value::Children ch;
  for (const auto& k : op.arity.elements()) ch.emplace_back(k, children.elements()[rng.below(children.size())]);
  return Value::op(op.name, op.param.elements()[rng.below(op.param.size())], std::move(ch));
}

SuiteReport new_report(const std::string& suite, const std::string& instance, const GenConfig& cfg) {
  SuiteReport rep;
  rep.suite = suite;
  rep.instance = instance;
  rep.seed = cfg.seed;
  rep.samples = cfg.samples;
  return rep;
}

}  // namespace

SuiteReport run_structure_suite(const Resumption& r, const std::string& instance, const GenConfig& cfg) {
  SuiteReport rep = new_report("structure", instance, cfg);
  const BaseMonad& base = r.base();
  auto show = [&](const Tree& t) { return render_tree(r, t, cfg.depth); };
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    Rng rng = sample_rng(cfg, "structure/" + instance, s);
    const Carrier X = gen_carrier(rng, "x", cfg);
    const Carrier Y = gen_carrier(rng, "y", cfg);
    Tree t = gen_tree(rng, r, X, cfg);
    auto f = gen_kleisli(rng, r, X, Y, cfg);

    rep.record("res.out_inverse", Tree::wrap(t.out()).out() == t.out() && bisimilar(r, Tree::wrap(t.out()), t, cfg.depth),
               [&] { return show(t); });

    Tree bound = r.bind(t, f.as_cont());
    bool kl = true;
    std::size_t kl_depth = 0;
    for (std::size_t d = 0; d <= cfg.depth && kl; ++d) {
      if (truncate(r, bound, d) != oracle_bind(r, t, f, d)) {
        kl = false;
        kl_depth = d;
      }
    }
    rep.record("res.kleisli_equation", kl, [&] {
      return "depth " + std::to_string(kl_depth) + ": t " + show(t) + " | f: " + table_text(r, f) + " | got " +
             render_tree(r, bound, kl_depth) + " want " + render_truncation(base, oracle_bind(r, t, f, kl_depth));
    });

    const Value c = Value::atom("c" + std::to_string(rng.below(3)));
    Tree st = r.strength(c, t);
    bool se = true;
    for (std::size_t d = 0; d <= cfg.depth && se; ++d) se = truncate(r, st, d) == oracle_strength(r, c, t, d);
    rep.record("res.strength_equation", se, [&] { return "t " + show(t); });

    // coit of a random coalgebra Y -> T(X + ΣY).
    auto g = std::make_shared<std::map<Value, MValue>>();
    for (const auto& y : Y.elements()) {
      g->emplace(y, gen_base(rng, base, [&](Rng& gr) {
        if (gr.chance(1, 2)) return Value::inl(X.elements()[gr.below(X.size())]);
        return Value::inr(gen_op(gr, r.signature(), Y));
      }, cfg));
    }
    Kleisli<MValue> coalg(Y, Carrier::sum(X, Carrier::opaque("ΣY")), [g](const Value& y) { return g->at(y); });
    auto unfold = coit(r, coalg);
    bool co = true;
    for (const auto& y : Y.elements()) {
      MValue want = base.map(coalg(y), [&](const Value& e) {
        if (e.is_inl()) return e;
        Value::Children ch;
        for (const auto& [k, seed] : e.payload().children()) ch.emplace_back(k, unfold(seed).as_value());
        return Value::inr(e.payload().with_children(std::move(ch)));
      });
      if (unfold(y).out() != want) co = false;
    }
    rep.record("res.coit_equation", co, [&] { return "g: " + table_text(base, coalg); });

    MValue m = gen_value(rng, base, X, cfg);
    rep.record("res.ext_equation", r.ext(m).out() == base.map(m, [](const Value& x) { return Value::inl(x); }),
               [&] { return base.render(m); });

    Value op = gen_op(rng, r.signature(), X);
    Value::Children leaves;
    for (const auto& [k, x] : op.children()) leaves.emplace_back(k, Value::layer(base.eta(Value::inl(x))));
    MValue iota_want = base.eta(op.with_children(std::move(leaves)));
    rep.record("res.iota_equation", truncate(r, r.iota(op), 1) == iota_want, [&] { return op.to_string(); });

    const MValue* first = &bound.out();
    rep.record("res.memo_forcing", first == &bound.out() && bound.forced(), [] { return std::string("refired"); });

    bool mono = true;
    for (std::size_t d = 0; d < cfg.depth; ++d) {
      if (recut(base, truncate(r, bound, d + 1), d) != truncate(r, bound, d)) mono = false;
    }
    rep.record("res.truncate_monotone", mono, [&] { return show(bound); });
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Extension, guardedness, partition
// ---------------------------------------------------------------------------

SuiteReport run_extension_suite(const Resumption& r, const std::string& instance, const GenConfig& cfg) {
  SuiteReport rep = new_report("extension", instance, cfg);
  const BaseMonad& base = r.base();
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    Rng rng = sample_rng(cfg, "extension/" + instance, s);
    const Carrier X = gen_carrier(rng, "x", cfg);
    const Carrier Y = gen_carrier(rng, "y", cfg);
    auto g = gen_kleisli(rng, base, X, Carrier::sum(Y, X), cfg);
    Kleisli<Tree> f(X, g.cod(), [r, g](const Value& x) { return r.ext(g(x)); });
    auto f_dag = iterate_res(r, f);
    auto g_dag = base.iterate(g);
    std::optional<std::string> diff;
    for (const auto& x : X.elements()) {
      MValue want = base.map(g_dag(x), [](const Value& y) { return Value::inl(y); });
      if (f_dag(x).out() != want && !diff) {
        diff = "at " + x.to_string() + ": " + render_tree(r, f_dag(x), 0) + " vs " +
               render_truncation(base, want);
      }
    }
    rep.record("res.extension", !diff, [&] { return *diff + " | g: " + table_text(base, g); });
  }
  return rep;
}

SuiteReport run_guarded_suite(const Resumption& r, const std::string& instance, const GenConfig& cfg) {
  SuiteReport rep = new_report("guarded", instance, cfg);
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    Rng rng = sample_rng(cfg, "guarded/" + instance, s);
    const Carrier X = gen_carrier(rng, "x", cfg);
    const Carrier Y = gen_carrier(rng, "y", cfg);
    const Carrier YX = Carrier::sum(Y, X);
    std::vector<Value> tops;
    for (const auto& y : Y.elements()) tops.push_back(Value::inl(y));
    const Carrier top = Carrier::of("Y", tops);
    auto table = std::make_shared<std::map<Value, Tree>>();
    for (const auto& x : X.elements()) table->emplace(x, gen_tree(rng, r, YX, cfg, top));
    Kleisli<Tree> f(X, YX, [table](const Value& x) { return table->at(x); });
    auto tables = [&] { return "f: " + table_text(r, f); };

    GuardednessWitness w = check_guarded(r, f);
    rep.record("guarded.detected", w.guarded, [&] { return w.describe() + " | " + tables(); });
    if (!w.guarded) continue;

    auto f_dag = solve_guarded(r, f);
    std::optional<std::string> diff;
    for (const auto& x : X.elements()) {
      Tree unfolded = r.bind(f(x), [&](const Value& e) { return e.is_inl() ? r.eta(e.payload()) : f_dag(e.payload()); });
      for (std::size_t d = 1; d <= cfg.depth && !diff; ++d) {
        if (!bisimilar(r, unfolded, f_dag(x), d)) {
          diff = "at " + x.to_string() + " depth " + std::to_string(d) + ": " + render_tree(r, unfolded, d) +
                 " vs " + render_tree(r, f_dag(x), d);
        }
      }
    }
    rep.record("guarded.fixpoint", !diff, [&] { return *diff + " | " + tables(); });

    auto fixed = guard_transform(r, f);
    rep.record("guarded.transform_fixes",
               !compare_on(r, X, [&](const Value& x) { return fixed(x); }, [&](const Value& x) { return f(x); }),
               tables);

    auto via_iterate = iterate_res(r, f);
    rep.record("guarded.agrees_with_iterate",
               !compare_on(r, X, [&](const Value& x) { return via_iterate(x); },
                           [&](const Value& x) { return f_dag(x); }),
               tables);

    // Arbitrary f: ‡ yields a guarded morphism, is idempotent, and f† = (f‡)†.
    auto h = gen_kleisli(rng, r, X, YX, cfg);
    auto h_guarded = guard_transform(r, h);
    rep.record("guarded.transform_guarded", check_guarded(r, h_guarded).guarded,
               [&] { return "h: " + table_text(r, h); });
    auto twice = guard_transform(r, h_guarded);
    rep.record("guarded.transform_idempotent",
               !compare_on(r, X, [&](const Value& x) { return twice(x); }, [&](const Value& x) { return h_guarded(x); }),
               [&] { return "h: " + table_text(r, h); });
    auto h_dag = iterate_res(r, h);
    auto h_solved = solve_guarded(r, h_guarded);
    rep.record("guarded.intermediate",
               !compare_on(r, X, [&](const Value& x) { return h_dag(x); }, [&](const Value& x) { return h_solved(x); }),
               [&] { return "h: " + table_text(r, h); });

    // A bare recursive call is refused with its location.
    Value x0 = X.elements()[rng.below(X.size())];
    Kleisli<Tree> bare(X, YX, [r, x0](const Value& x) { return r.eta(Value::inr(x0)); });
    GuardednessWitness bw = check_guarded(r, bare);
    bool refused = false;
    try {
      solve_guarded(r, bare);
    } catch (const UnguardedError&) {
      refused = true;
    }
    rep.record("guarded.unguarded_rejected", !bw.guarded && bw.leaf == Value::inr(x0) && refused,
               [&] { return bw.describe(); });
  }
  return rep;
}

SuiteReport run_partition_suite(const GenConfig& cfg) {
  SuiteReport rep = new_report("partition", "maybe", cfg);
  BaseMonad m = BaseMonad::maybe();
  auto agree = [&](const Kleisli<MValue>& f) {
    auto a = kleene_iterate(m, f);
    auto b = partition_iterate_maybe(m, f);
    return compare_on(m, f.dom(), [&](const Value& x) { return a(x); }, [&](const Value& x) { return b(x); });
  };
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    Rng rng = sample_rng(cfg, "partition", s);
    const Carrier X = gen_carrier(rng, "x", cfg);
    const Carrier Y = gen_carrier(rng, "y", cfg);
    auto f = gen_kleisli(rng, m, X, Carrier::sum(Y, X), cfg);
    auto diff = agree(f);
    rep.record("maybe.partition_random", !diff, [&] { return *diff + " | f: " + table_text(m, f); });
  }
  for (std::size_t n : {2, 3}) {
    const Carrier X = Carrier::numbered("x", "x", n);
    const Carrier Y = Carrier::numbered("y", "y", n);
    const Carrier YX = Carrier::sum(Y, X);
    std::vector<MValue> options{m.bottom()};
    for (const auto& e : YX.elements()) options.push_back(m.eta(e));
    std::vector<std::size_t> pick(n, 0);
    const std::string name = "maybe.partition_exhaustive_" + std::to_string(n);
    for (;;) {
      auto table = std::make_shared<std::map<Value, MValue>>();
      for (std::size_t i = 0; i < n; ++i) table->emplace(X.elements()[i], options[pick[i]]);
      Kleisli<MValue> f(X, YX, [table](const Value& x) { return table->at(x); });
      auto diff = agree(f);
      rep.record(name, !diff, [&] { return *diff + " | f: " + table_text(m, f); });
      std::size_t i = 0;
      while (i < n && ++pick[i] == options.size()) pick[i++] = 0;
      if (i == n) break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

SuiteReport run_ext_morphism_suite(const Resumption& r, const std::string& instance, const GenConfig& cfg) {
  SuiteReport rep = new_report("ext-morphism", instance, cfg);
  const BaseMonad& base = r.base();
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    Rng rng = sample_rng(cfg, "ext/" + instance, s);
    const Carrier X = gen_carrier(rng, "x", cfg);
    const Carrier Y = gen_carrier(rng, "y", cfg);
    MValue m = gen_value(rng, base, X, cfg);
    auto f = gen_kleisli(rng, base, X, Y, cfg);
    auto g = gen_kleisli(rng, base, X, Carrier::sum(Y, X), cfg);
    const Value c = Value::atom("c0");
    auto show = [&] { return base.render(m) + " | f: " + table_text(base, f); };

    rep.record("ext.unit",
               !compare_on(r, X, [&](const Value& x) { return r.ext(base.eta(x)); },
                           [&](const Value& x) { return r.eta(x); }),
               show);
    rep.record("ext.bind",
               r.equal(r.ext(base.bind(m, f.as_cont())),
                       r.bind(r.ext(m), [&](const Value& x) { return r.ext(f(x)); })),
               show);
    rep.record("ext.strength", r.equal(r.ext(base.strength(c, m)), r.strength(c, r.ext(m))), show);
    auto g_dag = base.iterate(g);
    auto eg_dag = iterate_res(r, Kleisli<Tree>(X, g.cod(), [r, g](const Value& x) { return r.ext(g(x)); }));
    rep.record("ext.iterate",
               !compare_on(r, X, [&](const Value& x) { return r.ext(g_dag(x)); },
                           [&](const Value& x) { return eg_dag(x); }),
               [&] { return "g: " + table_text(base, g); });
  }
  return rep;
}

SuiteReport run_sigma_morphism_suite(const MonadMorphism& sigma, const std::string& instance, const GenConfig& cfg) {
  SuiteReport rep = new_report("sigma-morphism", instance, cfg);
  const BaseMonad& src = sigma.source();
  const BaseMonad& tgt = sigma.target();
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    Rng rng = sample_rng(cfg, "sigma/" + instance, s);
    const Carrier X = gen_carrier(rng, "x", cfg);
    const Carrier Y = gen_carrier(rng, "y", cfg);
    MValue m = gen_value(rng, src, X, cfg);
    auto f = gen_kleisli(rng, src, X, Y, cfg);
    auto g = gen_kleisli(rng, src, X, Carrier::sum(Y, X), cfg);
    const Value c = Value::atom("c0");
    auto show = [&] { return src.render(m) + " | f: " + table_text(src, f); };
    bool unit = true;
    for (const auto& x : X.elements()) unit = unit && sigma(src.eta(x)) == tgt.eta(x);
    rep.record("sigma.unit", unit, show);
    rep.record("sigma.bind",
               sigma(src.bind(m, f.as_cont())) == tgt.bind(sigma(m), [&](const Value& x) { return sigma(f(x)); }),
               show);
    rep.record("sigma.strength", sigma(src.strength(c, m)) == tgt.strength(c, sigma(m)), show);
    auto g_dag = src.iterate(g);
    auto sg_dag = tgt.iterate(Kleisli<MValue>(X, g.cod(), [sigma, g](const Value& x) { return sigma(g(x)); }));
    bool it = true;
    for (const auto& x : X.elements()) it = it && sigma(g_dag(x)) == sg_dag(x);
    rep.record("sigma.iterate", it, [&] { return "g: " + table_text(src, g); });
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Handler
// ---------------------------------------------------------------------------

namespace {

struct Fold {
  MValue value;
  std::size_t height;
};

/// Independent evaluation of a finite tree by structural recursion.
Fold fold_tree(const Resumption& r, const MonadMorphism& sigma, const EffectInterpretation& ups, const Tree& t) {
  const BaseMonad& s = sigma.target();
  std::size_t height = 0;
  MValue v = s.bind(sigma(t.out()), [&](const Value& e) {
    if (e.is_inl()) return s.eta(e.payload());
    const Value& op = e.payload();
    return s.bind(ups.effect(op), [&](const Value& k) {
      Fold sub = fold_tree(r, sigma, ups, Tree::from_value(op.child(k)));
      height = std::max(height, sub.height + 1);
      return sub.value;
    });
  });
  return {v, height};
}

}  // namespace

std::vector<HandlerSetup> handler_setups() {
  Carrier states = Carrier::numbered("S", "s", 2);
  return {{"maybe>maybe", BaseMonad::maybe(), BaseMonad::maybe()},
          {"maybe>finset", BaseMonad::maybe(), BaseMonad::finset()},
          {"finset>finset", BaseMonad::finset(), BaseMonad::finset()},
          {"finset>nondetstate", BaseMonad::finset(), BaseMonad::nondet_state(states)},
          {"nondetstate>nondetstate", BaseMonad::nondet_state(states), BaseMonad::nondet_state(states)}};
}

SuiteReport run_handler_suite(const HandlerSetup& setup, const GenConfig& cfg, std::size_t fuel) {
  SuiteReport rep = new_report("handler", setup.name + (setup.mutate_sigma ? " (collapsed σ)" : ""), cfg);
  Resumption r(setup.source, test_signature(), cfg.depth);
  MonadMorphism sigma =
      setup.mutate_sigma ? MonadMorphism::collapse(setup.source) : MonadMorphism::between(setup.source, setup.target);
  const BaseMonad& S = sigma.target();
  GenConfig finite = cfg;
  finite.back_edges = false;

  for (const char* name : {"handler.ext_triangle", "handler.iota_triangle", "handler.monotone",
                           "handler.fold_oracle", "handler.unit", "handler.bind", "handler.strength",
                           "handler.iterate"}) {
    rep.axiom(name);
  }

  for (std::size_t s = 0; s < cfg.samples; ++s) {
    Rng rng = sample_rng(cfg, "handler/" + rep.instance, s);
    const Carrier X = gen_carrier(rng, "x", cfg);
    const Carrier Y = gen_carrier(rng, "y", cfg);
    EffectInterpretation ups(r.signature(), S);
    for (const auto& op : r.signature().ops()) ups.set(op.name, gen_kleisli(rng, S, op.param, op.arity, cfg));
    Handler xi(r, sigma, ups);

    MValue m = gen_value(rng, setup.source, X, cfg);
    HandleResult ext_res = xi.handle(r.ext(m), fuel);
    rep.record("handler.ext_triangle", ext_res.converged && ext_res.value == sigma(m), [&] {
      return setup.source.render(m) + " -> " + S.render(ext_res.value) + (ext_res.converged ? "" : " (approximate)");
    });

    Value op = gen_op(rng, r.signature(), X);
    HandleResult iota_res = xi.handle(r.iota(op), fuel);
    rep.record("handler.iota_triangle", iota_res.converged && iota_res.value == ups.apply(op), [&] {
      return op.to_string() + " -> " + S.render(iota_res.value) + " want " + S.render(ups.apply(op));
    });

    for (int k = 0; k < 2; ++k) {
      Tree t = gen_tree(rng, r, X, cfg);
      std::size_t n = rng.below(fuel + 1);
      MValue lo = xi.handle(t, n).value;
      MValue hi = xi.handle(t, n + 1).value;
      rep.record("handler.monotone", S.leq(lo, hi), [&] {
        return "fuel " + std::to_string(n) + ": " + S.render(lo) + " then " + S.render(hi) + " | " +
               render_tree(r, t, cfg.depth);
      });
    }

    Tree ft = gen_tree(rng, r, X, finite);
    Fold want = fold_tree(r, sigma, ups, ft);
    HandleResult got = xi.handle(ft, want.height + 1);
    rep.record("handler.fold_oracle", got.converged && got.value == want.value, [&] {
      return render_tree(r, ft, want.height + 1) + " -> " + S.render(got.value) + " want " + S.render(want.value);
    });

    // Morphism laws of ξ, compared where every evaluation involved converged.
    auto eval = [&](const Tree& t) { return xi.handle(t, fuel); };
    {
      Value x = X.elements()[rng.below(X.size())];
      HandleResult u = eval(r.eta(x));
      rep.record("handler.unit", u.converged && u.value == S.eta(x), [&] { return S.render(u.value); });
    }
    {
      auto f = gen_kleisli(rng, r, X, Y, finite);
      HandleResult lhs = eval(r.bind(ft, f.as_cont()));
      HandleResult rt = eval(ft);
      bool all = lhs.converged && rt.converged;
      std::map<Value, MValue> fx;
      for (const auto& x : X.elements()) {
        HandleResult h = eval(f(x));
        all = all && h.converged;
        fx.emplace(x, h.value);
      }
      if (all) {
        MValue rhs = S.bind(rt.value, [&](const Value& x) { return fx.at(x); });
        rep.record("handler.bind", lhs.value == rhs,
                   [&] { return S.render(lhs.value) + " vs " + S.render(rhs) + " | t " + render_tree(r, ft, cfg.depth); });
      }
    }
    {
      const Value c = Value::atom("c0");
      HandleResult lhs = eval(r.strength(c, ft));
      HandleResult rt = eval(ft);
      if (lhs.converged && rt.converged) {
        rep.record("handler.strength", lhs.value == S.strength(c, rt.value),
                   [&] { return S.render(lhs.value) + " vs " + S.render(S.strength(c, rt.value)); });
      }
    }
    {
      const Carrier YX = Carrier::sum(Y, X);
      auto g = gen_kleisli(rng, r, X, YX, finite);
      auto g_dag = iterate_res(r, g);
      bool all = true;
      std::map<Value, MValue> hg;
      for (const auto& x : X.elements()) {
        HandleResult h = eval(g(x));
        all = all && h.converged;
        hg.emplace(x, h.value);
      }
      std::map<Value, HandleResult> lhs;
      for (const auto& x : X.elements()) {
        lhs.emplace(x, eval(g_dag(x)));
        all = all && lhs.at(x).converged;
      }
      if (all) {
        auto rhs = S.iterate(Kleisli<MValue>(X, YX, [hg](const Value& x) { return hg.at(x); }));
        bool ok = true;
        for (const auto& x : X.elements()) ok = ok && lhs.at(x).value == rhs(x);
        rep.record("handler.iterate", ok, [&] { return "g: " + table_text(r, g); });
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

const std::vector<std::string>& identity_checklist() {
  static const std::vector<std::string> list = {
      "monad.left_unit", "monad.right_unit", "monad.assoc",
      "strength.str1", "strength.str2", "strength.str3", "strength.str4",
      "iter.unfolding", "iter.naturality", "iter.dinaturality", "iter.codiagonal", "iter.uniformity",
      "iter.strength", "iter.strong", "bekic",
      "divergence.constant", "divergence.coconstant", "divergence.loop",
      "continuity.compose_monotone", "continuity.copair_monotone", "continuity.strength_bottom",
      "continuity.kleene_chain",
      "res.kleisli_equation", "res.strength_equation", "res.coit_equation", "res.ext_equation",
      "res.iota_equation", "res.out_inverse",
      "res.extension", "guarded.fixpoint", "guarded.transform_fixes", "guarded.intermediate",
      "maybe.partition_random",
      "ext.unit", "ext.bind", "ext.strength", "ext.iterate",
      "sigma.unit", "sigma.bind", "sigma.strength", "sigma.iterate",
      "handler.ext_triangle", "handler.iota_triangle", "handler.unit", "handler.bind", "handler.strength",
      "handler.iterate"};
  return list;
}

const std::vector<SuiteInfo>& suite_registry() {
  static const std::vector<SuiteInfo> registry = {
      {"axioms",
       {"monad.left_unit", "monad.right_unit", "monad.assoc", "strength.str1", "strength.str2", "strength.str3",
        "strength.str4", "iter.unfolding", "iter.naturality", "iter.dinaturality", "iter.codiagonal",
        "iter.uniformity", "iter.strength", "iter.strong", "bekic", "divergence.constant",
        "divergence.coconstant", "divergence.loop", "divergence.least"}},
      {"continuity",
       {"continuity.compose_monotone", "continuity.copair_monotone", "continuity.strength_bottom",
        "continuity.bind_bottom", "continuity.kleene_chain"}},
      {"structure",
       {"res.out_inverse", "res.kleisli_equation", "res.strength_equation", "res.coit_equation",
        "res.ext_equation", "res.iota_equation", "res.memo_forcing", "res.truncate_monotone"}},
      {"extension", {"res.extension"}},
      {"guarded",
       {"guarded.detected", "guarded.fixpoint", "guarded.transform_fixes", "guarded.agrees_with_iterate",
        "guarded.transform_guarded", "guarded.transform_idempotent", "guarded.intermediate",
        "guarded.unguarded_rejected"}},
      {"partition", {"maybe.partition_random", "maybe.partition_exhaustive_2", "maybe.partition_exhaustive_3"}},
      {"morphisms",
       {"ext.unit", "ext.bind", "ext.strength", "ext.iterate", "sigma.unit", "sigma.bind", "sigma.strength",
        "sigma.iterate"}},
      {"handler",
       {"handler.ext_triangle", "handler.iota_triangle", "handler.monotone", "handler.fold_oracle",
        "handler.unit", "handler.bind", "handler.strength", "handler.iterate"}},
  };
  return registry;
}

void verify_registry() {
  std::set<std::string> covered;
  for (const auto& s : suite_registry()) covered.insert(s.identities.begin(), s.identities.end());
  std::string missing;
  for (const auto& id : identity_checklist()) {
    if (!covered.count(id)) missing += " " + id;
  }
  if (!missing.empty()) throw Error("identities without a suite:" + missing);
}

std::vector<SuiteReport> run_named_suite(const std::string& name, const GenConfig& cfg) {
  verify_registry();
  bool known = name == "all";
  for (const auto& s : suite_registry()) known = known || s.name == name;
  if (!known) throw ConfigError("unknown suite '" + name + "'");
  auto want = [&](const char* s) { return name == "all" || name == s; };

  const Carrier states = Carrier::numbered("S", "s", 2);
  const std::vector<std::pair<std::string, BaseMonad>> bases = {
      {"maybe", BaseMonad::maybe()}, {"finset", BaseMonad::finset()}, {"nondetstate", BaseMonad::nondet_state(states)}};
  std::vector<std::pair<std::string, Resumption>> resumptions;
  for (const auto& [n, b] : bases) resumptions.emplace_back("res-" + n, Resumption(b, test_signature(), cfg.depth));

  std::vector<SuiteReport> out;
  if (want("axioms")) {
    for (const auto& [n, b] : bases) out.push_back(run_axiom_suite(b, n, cfg));
    for (const auto& [n, r] : resumptions) out.push_back(run_axiom_suite(r, n, cfg));
  }
  if (want("continuity")) {
    for (const auto& [n, b] : bases) out.push_back(run_continuity_suite(b, n, cfg));
  }
  if (want("structure")) {
    for (const auto& [n, r] : resumptions) out.push_back(run_structure_suite(r, n, cfg));
  }
  if (want("extension")) {
    for (const auto& [n, r] : resumptions) out.push_back(run_extension_suite(r, n, cfg));
  }
  if (want("guarded")) {
    for (const auto& [n, r] : resumptions) out.push_back(run_guarded_suite(r, n, cfg));
  }
  if (want("partition")) out.push_back(run_partition_suite(cfg));
  if (want("morphisms")) {
    for (const auto& [n, r] : resumptions) out.push_back(run_ext_morphism_suite(r, n, cfg));
    for (const auto& h : handler_setups()) {
      out.push_back(run_sigma_morphism_suite(MonadMorphism::between(h.source, h.target), h.name, cfg));
    }
  }
  if (want("handler")) {
    for (const auto& h : handler_setups()) out.push_back(run_handler_suite(h, cfg));
  }
  return out;
}

}  // namespace elgot
