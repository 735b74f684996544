#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elgot/kleisli.hpp"
#include "elgot/mvalue.hpp"
#include "elgot/value.hpp"

namespace elgot {

/// Renders one element of a monadic value.
using ElementRenderer = std::function<std::string(const Value&)>;

/// One of the ω-continuous base monads Maybe, FinSet and NondetState.
///
/// Every hom-set is a finite lattice once the carriers are fixed, so
/// iteration is the least fixpoint of `h |-> [η, h]* ∘ f`, found by running
/// the Kleene chain from ⊥ until two successive iterates coincide.
class BaseMonad {
 public:
  using value_type = MValue;
  using Kind = MValue::Kind;

  static BaseMonad maybe();
  static BaseMonad finset();
  /// `X |-> P(X × S)^S`; throws ConfigError when `states` is empty.
  static BaseMonad nondet_state(const Carrier& states);

  Kind kind() const { return kind_; }
  std::string name() const;
  /// State carrier (the unit carrier for Maybe and FinSet).
  const Carrier& states() const { return states_; }

  MValue eta(const Value& x) const;
  MValue bind(const MValue& m, const Cont<MValue>& k) const;
  MValue map(const MValue& m, const PureFn& h) const;
  /// `τ(c, m)`: pairs `c` onto every result of `m`.
  MValue strength(const Value& c, const MValue& m) const;
  MValue bottom() const;
  /// Least upper bound; Maybe only admits comparable arguments.
  MValue join(const MValue& a, const MValue& b) const;
  bool leq(const MValue& a, const MValue& b) const;
  bool equal(const MValue& a, const MValue& b) const { return a == b; }
  Kleisli<MValue> iterate(const Kleisli<MValue>& f) const;

  /// A FinSet value, or the state-independent NondetState value that keeps
  /// the state unchanged. Maybe admits at most one element.
  MValue choice(const std::vector<Value>& xs) const;
  /// Every result element occurring in `m` (sorted, without states).
  std::vector<Value> support(const MValue& m) const;

  std::string render(const MValue& m) const;
  std::string render(const MValue& m, const ElementRenderer& element) const;

  friend bool operator==(const BaseMonad& a, const BaseMonad& b) {
    return a.kind_ == b.kind_ && a.states_ == b.states_;
  }

 private:
  BaseMonad(Kind kind, Carrier states) : kind_(kind), states_(std::move(states)) {}
  void check(const MValue& m) const;

  Kind kind_;
  Carrier states_;
};

/// Least fixpoint iteration; the same operator as `BaseMonad::iterate`.
Kleisli<MValue> kleene_iterate(const BaseMonad& m, const Kleisli<MValue>& f);

/// Iteration for Maybe through the preimage partition `X_1, X_2, ..., X_∞`.
/// Throws ConfigError for other monads.
Kleisli<MValue> partition_iterate_maybe(const BaseMonad& m, const Kleisli<MValue>& f);

/// Instance by name: `maybe`, `finset` or `nondetstate` (the latter needs
/// a nonempty state carrier).
BaseMonad make_instance(std::string_view kind, const std::optional<Carrier>& states = std::nullopt);

}  // namespace elgot
