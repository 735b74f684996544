#include "elgot/resumption_iteration.hpp"

namespace elgot {

namespace {

void check_loop_shape(const Kleisli<Tree>& f, std::string_view what) {
  if (f.cod().shape() != Carrier::Shape::sum) {
    throw CarrierMismatch(std::string(what) + " expects a sum codomain, got " + f.cod().name());
  }
  require_same_carrier(f.dom(), f.cod().right(), what);
}

Value lift_children(const Value& op, const std::function<Tree(const Tree&)>& lift) {
  Value::Children ch;
  ch.reserve(op.children().size());
  for (const auto& [k, c] : op.children()) ch.emplace_back(k, lift(Tree::from_value(c)).as_value());
  return op.with_children(std::move(ch));
}

/// Corecursive solution driven by `layer : X -> T(Y + Σ T_Σ(Y + X))`.
/// Each node's top layer is `layer(x)` with every subtree continued by
/// `[η^ν, f†]‡‡`.
Kleisli<Tree> corecursive(const Resumption& r, const Carrier& x, const Carrier& y,
                          const Kleisli<MValue>& layer) {
  struct State {
    std::optional<Kleisli<Tree>> dag;
    std::function<Tree(const Tree&)> lift;
  };
  auto st = std::make_shared<State>();
  BaseMonad base = r.base();
  st->dag.emplace(x, y, [st, base, layer](const Value& v) {
    return Tree::suspend([st, base, layer, v]() {
      return base.map(layer(v), [&](const Value& e) {
        return e.is_inl() ? e : Value::inr(lift_children(e.payload(), st->lift));
      });
    });
  });
  st->lift = r.lifter([st, r](const Value& e) {
    return e.is_inl() ? r.eta(e.payload()) : (*st->dag)(e.payload());
  });
  return *st->dag;
}

}  // namespace

std::string GuardednessWitness::describe() const {
  if (guarded) return "guarded";
  return "unguarded at " + input.to_string() + ": " + path + " contains (leaf " + leaf.to_string() + ")";
}

GuardednessWitness check_guarded(const Resumption& r, const Kleisli<Tree>& f) {
  if (f.cod().shape() != Carrier::Shape::sum) {
    throw CarrierMismatch("check_guarded expects a sum codomain, got " + f.cod().name());
  }
  GuardednessWitness w;
  const BaseMonad& base = r.base();
  for (const auto& x : f.dom().elements()) {
    const MValue& top = f(x).out();
    for (std::size_t s = 0; s < top.rows().size(); ++s) {
      for (const auto& e : top.rows()[s]) {
        const Value& elem = base.kind() == MValue::Kind::nondet ? e.first() : e;
        if (elem.is_inl() && elem.payload().is_inr()) {
          w.input = x;
          w.leaf = elem.payload();
          w.path = "out(f(" + x.to_string() + "))";
          if (base.kind() == MValue::Kind::nondet) {
            w.path += " from state " + base.states().elements()[s].to_string();
          }
          return w;
        }
      }
    }
  }
  w.guarded = true;
  w.u.emplace(f.dom(), Carrier::sum(f.cod().left(), Carrier::opaque("Σ")), [base, f](const Value& x) {
    return base.map(f(x).out(), [](const Value& e) { return e.is_inl() ? e.payload() : e; });
  });
  return w;
}

Kleisli<MValue> pi_out(const Resumption& r, const Kleisli<Tree>& f) {
  check_loop_shape(f, "pi_out");
  const Carrier& y = f.cod().left();
  Carrier mid = Carrier::opaque("(" + y.name() + "+Σ)");
  BaseMonad base = r.base();
  return Kleisli<MValue>(f.dom(), Carrier::sum(mid, f.dom()), [base, f](const Value& x) {
    return base.map(f(x).out(), [](const Value& e) {
      if (e.is_inr()) return Value::inl(e);
      return e.payload().is_inl() ? Value::inl(e.payload()) : e.payload();
    });
  });
}

Kleisli<Tree> guard_transform(const Resumption& r, const Kleisli<Tree>& f) {
  Kleisli<MValue> w_dag = r.base().iterate(pi_out(r, f));
  BaseMonad base = r.base();
  return Kleisli<Tree>(f.dom(), f.cod(), [base, w_dag](const Value& x) {
    return Tree::suspend([base, w_dag, x]() {
      return base.map(w_dag(x), [](const Value& e) { return e.is_inl() ? Value::inl(e) : e; });
    });
  });
}

Kleisli<Tree> solve_guarded(const Resumption& r, const Kleisli<Tree>& f) {
  check_loop_shape(f, "solve_guarded");
  GuardednessWitness w = check_guarded(r, f);
  if (!w.guarded) throw UnguardedError(w.describe());
  return corecursive(r, f.dom(), f.cod().left(), *w.u);
}

Kleisli<Tree> iterate_res(const Resumption& r, const Kleisli<Tree>& f) {
  check_loop_shape(f, "iterate_res");
  return corecursive(r, f.dom(), f.cod().left(), r.base().iterate(pi_out(r, f)));
}

Kleisli<Tree> Resumption::iterate(const Kleisli<Tree>& f) const { return iterate_res(*this, f); }

}  // namespace elgot
