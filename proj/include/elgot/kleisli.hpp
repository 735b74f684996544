#pragma once

#include <concepts>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "elgot/value.hpp"

namespace elgot {

/// Continuation used by Kleisli lifting: one element to one monadic value.
template <class V>
using Cont = std::function<V(const Value&)>;

/// Pure map between carriers.
using PureFn = std::function<Value(const Value&)>;

/// A total function `dom -> T cod` over a finite domain.
///
/// Results are memoized per input so that repeated application yields the
/// identical monadic value; for resumption trees this keeps node identity
/// tokens stable. Copies share the memo table.
template <class V>
class Kleisli {
 public:
  Kleisli(Carrier dom, Carrier cod, Cont<V> fn)
      : dom_(std::move(dom)), cod_(std::move(cod)), state_(std::make_shared<State>()) {
    state_->fn = std::move(fn);
  }

  const Carrier& dom() const { return dom_; }
  const Carrier& cod() const { return cod_; }

  V operator()(const Value& x) const {
    if (!dom_.contains(x)) {
      throw CarrierMismatch(x.to_string() + " is not an element of " + dom_.name());
    }
    {
      std::lock_guard<std::mutex> lock(state_->mu);
      auto it = state_->memo.find(x);
      if (it != state_->memo.end()) return it->second;
    }
    V result = state_->fn(x);
    std::lock_guard<std::mutex> lock(state_->mu);
    return state_->memo.emplace(x, std::move(result)).first->second;
  }

  /// The function as a plain continuation (shares the memo table).
  Cont<V> as_cont() const {
    return [self = *this](const Value& x) { return self(x); };
  }

 private:
  struct State {
    Cont<V> fn;
    std::mutex mu;
    std::map<Value, V> memo;
  };

  Carrier dom_;
  Carrier cod_;
  std::shared_ptr<State> state_;
};

/// Interface shared by the base monads and the resumption monad.
///
/// `iterate` takes `f : X -> T(Y + X)` (its codomain carrier a sum) and
/// returns `f† : X -> T Y`. `equal` is the instance's notion of equality of
/// monadic values: exact for base monads, depth-bounded bisimilarity for
/// resumptions.
template <class M>
concept ElgotMonad = requires(const M& m, const typename M::value_type& a, const Value& v,
                              const Cont<typename M::value_type>& k, const PureFn& h,
                              const Kleisli<typename M::value_type>& f) {
  { m.eta(v) } -> std::same_as<typename M::value_type>;
  { m.bind(a, k) } -> std::same_as<typename M::value_type>;
  { m.map(a, h) } -> std::same_as<typename M::value_type>;
  { m.strength(v, a) } -> std::same_as<typename M::value_type>;
  { m.iterate(f) } -> std::same_as<Kleisli<typename M::value_type>>;
  { m.equal(a, a) } -> std::same_as<bool>;
  { m.render(a) } -> std::convertible_to<std::string>;
};

template <ElgotMonad M>
using ValueOf = typename M::value_type;

/// `η : X -> T X`.
template <ElgotMonad M>
Kleisli<ValueOf<M>> unit_fn(const M& m, const Carrier& x) {
  return Kleisli<ValueOf<M>>(x, x, [m](const Value& v) { return m.eta(v); });
}

/// `η ∘ h` for a pure map `h : X -> Y`.
template <ElgotMonad M>
Kleisli<ValueOf<M>> pure_fn(const M& m, const Carrier& x, const Carrier& y, PureFn h) {
  return Kleisli<ValueOf<M>>(x, y, [m, h = std::move(h)](const Value& v) { return m.eta(h(v)); });
}

/// Kleisli composite `g* ∘ f`.
template <ElgotMonad M>
Kleisli<ValueOf<M>> compose_kleisli(const M& m, const Kleisli<ValueOf<M>>& g,
                                    const Kleisli<ValueOf<M>>& f) {
  require_same_carrier(g.dom(), f.cod(), "compose_kleisli");
  return Kleisli<ValueOf<M>>(f.dom(), g.cod(),
                             [m, g, f](const Value& x) { return m.bind(f(x), g.as_cont()); });
}

/// Copairing `[f, g] : X + Z -> T Y`.
template <class V>
Kleisli<V> copair(const Kleisli<V>& f, const Kleisli<V>& g) {
  require_same_carrier(f.cod(), g.cod(), "copair");
  return Kleisli<V>(Carrier::sum(f.dom(), g.dom()), f.cod(), [f, g](const Value& v) {
    return v.is_inl() ? f(v.payload()) : g(v.payload());
  });
}

/// `T h ∘ f` for a pure map `h` into `cod`.
template <ElgotMonad M>
Kleisli<ValueOf<M>> post_map(const M& m, const Kleisli<ValueOf<M>>& f, const Carrier& cod,
                             PureFn h) {
  return Kleisli<ValueOf<M>>(f.dom(), cod,
                             [m, f, h = std::move(h)](const Value& x) { return m.map(f(x), h); });
}

/// `dist : C × (A + B) -> C × A + C × B`.
inline Value distribute(const Value& pair) {
  const Value& c = pair.first();
  const Value& s = pair.second();
  return s.is_inl() ? Value::inl(Value::pair(c, s.payload()))
                    : Value::inr(Value::pair(c, s.payload()));
}

/// Strong iteration: for `f : Z × X -> T(Y + X)` returns `Z × X -> T Y`,
/// carrying the `Z` component unchanged around the loop.
template <ElgotMonad M>
Kleisli<ValueOf<M>> strong_iterate(const M& m, const Kleisli<ValueOf<M>>& f) {
  const Carrier& zx = f.dom();
  if (zx.shape() != Carrier::Shape::product) {
    throw CarrierMismatch("strong_iterate expects a product domain, got " + zx.name());
  }
  if (f.cod().shape() != Carrier::Shape::sum) {
    throw CarrierMismatch("strong_iterate expects a sum codomain, got " + f.cod().name());
  }
  require_same_carrier(zx.right(), f.cod().right(), "strong_iterate");
  const Carrier& y = f.cod().left();
  // (T(snd + id) ∘ T dist ∘ τ ∘ <fst, f>)†
  Kleisli<ValueOf<M>> step(zx, Carrier::sum(y, zx), [m, f](const Value& zx_elem) {
    const Value& z = zx_elem.first();
    auto paired = m.strength(z, f(zx_elem));
    return m.map(paired, [](const Value& p) {
      Value d = distribute(p);
      return d.is_inl() ? Value::inl(d.payload().second()) : d;
    });
  });
  return m.iterate(step);
}

/// Outcome of a sampled identity check.
struct CheckReport {
  std::size_t checked = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Pointwise equality of two Kleisli functions over their (shared) domain.
/// Returns the first element on which they differ, if any.
template <ElgotMonad M>
std::optional<Value> first_difference(const M& m, const Kleisli<ValueOf<M>>& a,
                                      const Kleisli<ValueOf<M>>& b) {
  for (const auto& x : a.dom().elements()) {
    if (!m.equal(a(x), b(x))) return x;
  }
  return std::nullopt;
}

/// Bekić identity for `f : Y -> T((Z+Y)+X)` and `g : X -> T((Z+Y)+X)`:
///
///   (Tα ∘ [f, g])† = [η, h†]* ∘ [η ∘ inr, g†]   with h = [η, g†]* ∘ f.
template <ElgotMonad M>
CheckReport check_bekic(const M& m, const Kleisli<ValueOf<M>>& f, const Kleisli<ValueOf<M>>& g) {
  require_same_carrier(f.cod(), g.cod(), "check_bekic");
  const Carrier& zy_x = f.cod();
  const Carrier& zy = zy_x.left();
  const Carrier& x = zy_x.right();
  const Carrier& z = zy.left();
  const Carrier& y = zy.right();
  require_same_carrier(y, f.dom(), "check_bekic (dom f)");
  require_same_carrier(x, g.dom(), "check_bekic (dom g)");

  using V = ValueOf<M>;
  const Carrier yx = Carrier::sum(y, x);
  const auto alpha = [](const Value& v) {
    if (v.is_inr()) return Value::inr(v);  // inr x -> inr (inr x)
    const Value& zy_elem = v.payload();
    return zy_elem.is_inl() ? zy_elem : Value::inr(Value::inl(zy_elem.payload()));
  };
  Kleisli<V> joint(yx, Carrier::sum(z, yx), [m, f, g, alpha](const Value& v) {
    return m.map(v.is_inl() ? f(v.payload()) : g(v.payload()), alpha);
  });
  const Kleisli<V> lhs = m.iterate(joint);

  const Kleisli<V> g_dag = m.iterate(g);
  Kleisli<V> h(y, zy, [m, f, g_dag](const Value& yv) {
    return m.bind(f(yv), [m, g_dag](const Value& e) {
      return e.is_inl() ? m.eta(e.payload()) : g_dag(e.payload());
    });
  });
  const Kleisli<V> h_dag = m.iterate(h);

  CheckReport report;
  for (const auto& v : yx.elements()) {
    ++report.checked;
    V inner = v.is_inl() ? m.eta(Value::inr(v.payload())) : g_dag(v.payload());
    V rhs = m.bind(inner, [m, h_dag](const Value& e) {
      return e.is_inl() ? m.eta(e.payload()) : h_dag(e.payload());
    });
    V left = lhs(v);
    if (!m.equal(left, rhs)) {
      report.failures.push_back("at " + v.to_string() + ": lhs " + m.render(left) + " rhs " +
                                m.render(rhs));
    }
  }
  return report;
}

}  // namespace elgot
