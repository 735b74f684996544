#include "elgot/handler.hpp"

#include <deque>
#include <set>

namespace elgot {

// ---------------------------------------------------------------------------
// MonadMorphism
// ---------------------------------------------------------------------------

MonadMorphism MonadMorphism::identity(const BaseMonad& m) {
  return MonadMorphism(m, m, [](const MValue& v) { return v; });
}

MonadMorphism MonadMorphism::between(const BaseMonad& source, const BaseMonad& target) {
  using K = MValue::Kind;
  if (source == target) return identity(source);
  if (source.kind() == K::maybe && target.kind() == K::finset) {
    return MonadMorphism(source, target, [](const MValue& v) { return MValue(K::finset, v.rows()); });
  }
  if ((source.kind() == K::maybe || source.kind() == K::finset) && target.kind() == K::nondet) {
    return MonadMorphism(source, target, [target](const MValue& v) { return target.choice(v.rows()[0]); });
  }
  throw ConfigError("no monad morphism from " + source.name() + " to " + target.name());
}

MonadMorphism MonadMorphism::collapse(const BaseMonad& m) {
  return MonadMorphism(m, m, [](const MValue& v) {
    std::vector<std::vector<Value>> rows;
    for (const auto& row : v.rows()) {
      rows.push_back(row.empty() ? std::vector<Value>{} : std::vector<Value>{row.front()});
    }
    return MValue(v.kind(), std::move(rows));
  });
}

MValue MonadMorphism::operator()(const MValue& m) const {
  if (m.kind() != source_.kind()) throw CarrierMismatch("value of the wrong monad passed to a morphism");
  return fn_(m);
}

// ---------------------------------------------------------------------------
// EffectInterpretation
// ---------------------------------------------------------------------------

EffectInterpretation::EffectInterpretation(Signature sig, BaseMonad target)
    : sig_(std::move(sig)), target_(std::move(target)) {}

EffectInterpretation EffectInterpretation::named(std::string_view name, const Signature& sig,
                                                 const BaseMonad& target) {
  EffectInterpretation e(sig, target);
  for (const auto& op : sig.ops()) {
    std::function<MValue(const Value&)> fn;
    if (name == "first") {
      Value k = op.arity.elements().front();
      fn = [target, k](const Value&) { return target.eta(k); };
    } else if (name == "any") {
      if (target.kind() == MValue::Kind::maybe) {
        throw ConfigError("interpretation 'any' needs a nondeterministic target, not " + target.name());
      }
      std::vector<Value> all = op.arity.elements();
      fn = [target, all](const Value&) { return target.choice(all); };
    } else if (name == "deadlock") {
      fn = [target](const Value&) { return target.bottom(); };
    } else {
      throw ConfigError("unknown interpretation '" + std::string(name) + "'");
    }
    e.set(op.name, Kleisli<MValue>(op.param, op.arity, fn));
  }
  return e;
}

void EffectInterpretation::set(const std::string& op, Kleisli<MValue> u) {
  const OpDesc& d = sig_.find(op);
  if (!(u.dom() == d.param)) {
    throw InterpretationError("effect for " + op + " takes " + u.dom().name() + ", operation parameter is " +
                              d.param.name());
  }
  if (!(u.cod() == d.arity)) {
    throw InterpretationError("effect for " + op + " returns " + u.cod().name() + ", operation arity is " +
                              d.arity.name());
  }
  effects_.insert_or_assign(op, std::move(u));
}

MValue EffectInterpretation::effect(const Value& op) const {
  auto it = effects_.find(std::string(op.name()));
  if (it == effects_.end()) {
    throw InterpretationError("no interpretation for operation '" + std::string(op.name()) + "'");
  }
  const OpDesc& d = sig_.find(op.name());
  MValue m = it->second(op.param());
  for (const auto& k : target_.support(m)) {
    if (!d.arity.contains(k)) {
      throw InterpretationError("effect for " + d.name + " returned " + k.to_string() + " outside " +
                                d.arity.name());
    }
  }
  return m;
}

MValue EffectInterpretation::apply(const Value& op) const {
  return target_.map(effect(op), [&op](const Value& k) { return op.child(k); });
}

// ---------------------------------------------------------------------------
// Handler
// ---------------------------------------------------------------------------

Handler::Handler(Resumption source, MonadMorphism sigma, EffectInterpretation upsilon)
    : source_(std::move(source)), sigma_(std::move(sigma)), upsilon_(std::move(upsilon)) {
  if (!(sigma_.source() == source_.base())) {
    throw ConfigError("morphism source " + sigma_.source().name() + " differs from base " +
                      source_.base().name());
  }
  if (!(sigma_.target() == upsilon_.target())) {
    throw ConfigError("morphism target " + sigma_.target().name() + " differs from interpretation target " +
                      upsilon_.target().name());
  }
}

MValue Handler::zeta(const Tree& t) const {
  const BaseMonad& s = target();
  return s.bind(sigma_(t.out()), [&](const Value& e) {
    if (e.is_inl()) return s.eta(e);
    return s.map(upsilon_.apply(e.payload()), [](const Value& child) { return Value::inr(child); });
  });
}

HandleResult Handler::handle(const Tree& t, std::size_t fuel) const {
  const BaseMonad& s = target();
  std::map<std::uint64_t, MValue> steps;
  auto step = [&](const Tree& n) -> const MValue& {
    auto it = steps.find(n.id());
    if (it == steps.end()) it = steps.emplace(n.id(), zeta(n)).first;
    return it->second;
  };
  auto successors = [&](const Tree& n) {
    std::vector<Tree> out;
    for (const auto& e : s.support(step(n))) {
      if (e.is_inr()) out.push_back(Tree::from_value(e.payload()));
    }
    return out;
  };

  std::map<std::pair<std::uint64_t, std::size_t>, MValue> memo;
  std::function<MValue(const Tree&, std::size_t)> approx = [&](const Tree& n, std::size_t k) -> MValue {
    if (k == 0) return s.bottom();
    auto key = std::make_pair(n.id(), k);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    MValue v = s.bind(step(n), [&](const Value& e) {
      return e.is_inl() ? s.eta(e.payload()) : approx(Tree::from_value(e.payload()), k - 1);
    });
    return memo.emplace(key, std::move(v)).first->second;
  };

  HandleResult result;
  result.fuel = fuel;
  result.value = approx(t, fuel);

  // Nodes within `fuel` steps of the root; the set is closed when no
  // expanded node has a successor outside it.
  std::map<std::uint64_t, Tree> reached{{t.id(), t}};
  std::deque<std::pair<Tree, std::size_t>> queue{{t, 0}};
  bool closed = true;
  while (!queue.empty()) {
    auto [n, d] = queue.front();
    queue.pop_front();
    for (const auto& c : successors(n)) {
      if (reached.count(c.id())) continue;
      if (d >= fuel) {
        closed = false;
        continue;
      }
      reached.emplace(c.id(), c);
      queue.emplace_back(c, d + 1);
    }
  }
  result.reached = reached.size();
  if (closed) {
    result.converged = true;
    for (const auto& [id, n] : reached) {
      if (approx(n, fuel) != approx(n, fuel + 1)) {
        result.converged = false;
        break;
      }
    }
  }
  return result;
}

}  // namespace elgot
