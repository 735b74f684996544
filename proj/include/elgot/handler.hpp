#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "elgot/resumption.hpp"

namespace elgot {

/// Monad morphism `σ : T -> S` between base monads.
///
/// Supported pairs: identity, Maybe -> FinSet, Maybe -> NondetState and
/// FinSet -> NondetState (each an inclusion of pure behaviour).
class MonadMorphism {
 public:
  static MonadMorphism identity(const BaseMonad& m);
  /// Throws ConfigError for unsupported pairs.
  static MonadMorphism between(const BaseMonad& source, const BaseMonad& target);
  /// A map that keeps only the least element of every row. Not a monad
  /// morphism in general; used to check that the law suites notice.
  static MonadMorphism collapse(const BaseMonad& m);

  const BaseMonad& source() const { return source_; }
  const BaseMonad& target() const { return target_; }
  MValue operator()(const MValue& m) const;

 private:
  MonadMorphism(BaseMonad source, BaseMonad target, std::function<MValue(const MValue&)> fn)
      : source_(std::move(source)), target_(std::move(target)), fn_(std::move(fn)) {}

  BaseMonad source_;
  BaseMonad target_;
  std::function<MValue(const MValue&)> fn_;
};

/// Generic effects `u_i : a_i -> S b_i`, one per operation.
class EffectInterpretation {
 public:
  EffectInterpretation(Signature sig, BaseMonad target);

  /// Builds a named interpretation for every operation:
  ///   first    - returns the first arity position;
  ///   any      - chooses any arity position (FinSet and NondetState only);
  ///   deadlock - never returns.
  static EffectInterpretation named(std::string_view name, const Signature& sig, const BaseMonad& target);

  /// Throws InterpretationError if `u` does not fit the operation.
  void set(const std::string& op, Kleisli<MValue> u);

  const Signature& signature() const { return sig_; }
  const BaseMonad& target() const { return target_; }
  /// `u_op(param)`; every returned position is checked against the arity.
  MValue effect(const Value& op) const;
  /// `υ(op, p, children) = S(children)(u_op(p))`.
  MValue apply(const Value& op) const;

 private:
  Signature sig_;
  BaseMonad target_;
  std::map<std::string, Kleisli<MValue>> effects_;
};

/// Result of a fuel-bounded evaluation.
struct HandleResult {
  MValue value;
  bool converged = false;
  std::size_t fuel = 0;
  /// Nodes reached while deciding convergence.
  std::size_t reached = 0;
};

/// The morphism `ξ = ζ† : T_Σ -> S` determined by `σ` and `υ`, with
/// `ζ = [η ∘ inl, S inr ∘ υ]* ∘ σ ∘ out`.
class Handler {
 public:
  Handler(Resumption source, MonadMorphism sigma, EffectInterpretation upsilon);

  const Resumption& source() const { return source_; }
  const BaseMonad& target() const { return sigma_.target(); }

  /// One handling step, over `X + T_Σ X` (tree values on the right).
  MValue zeta(const Tree& t) const;

  /// The `fuel`-th Kleene approximant of `ζ†` at `t`. Converged when the
  /// nodes reachable within `fuel` steps form a closed set on which the
  /// approximants `fuel` and `fuel + 1` agree.
  HandleResult handle(const Tree& t, std::size_t fuel) const;

 private:
  Resumption source_;
  MonadMorphism sigma_;
  EffectInterpretation upsilon_;
};

}  // namespace elgot
