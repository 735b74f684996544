#pragma once

#include <optional>
#include <string>

#include "elgot/resumption.hpp"

namespace elgot {

/// A guarded solver was handed a morphism with a bare recursive call.
class UnguardedError : public Error {
 public:
  using Error::Error;
};

/// Outcome of a guardedness check of `f : X -> T_Σ(Y + Z)`.
///
/// When guarded, `u : X -> T(Y + Σ T_Σ(Y + Z))` satisfies
/// `T(inl + id) ∘ u = out ∘ f`. Otherwise the first input whose top layer
/// holds a `Z` leaf is recorded.
struct GuardednessWitness {
  bool guarded = false;
  std::optional<Kleisli<MValue>> u;
  Value input;
  Value leaf;
  std::string path;

  std::string describe() const;
};

GuardednessWitness check_guarded(const Resumption& r, const Kleisli<Tree>& f);

/// `Tπ ∘ out ∘ f : X -> T((Y + Σ T_Σ(Y+X)) + X)` with
/// `π = [inl + id, inl ∘ inr]`; subtrees stay opaque tokens.
Kleisli<MValue> pi_out(const Resumption& r, const Kleisli<Tree>& f);

/// `f‡ = out⁻¹ ∘ T(inl + id) ∘ (Tπ ∘ out ∘ f)†`, always guarded.
Kleisli<Tree> guard_transform(const Resumption& r, const Kleisli<Tree>& f);

/// Unique solution of a guarded `f`:
/// `out f†(x) = T(id + Σ[η^ν, f†]‡‡)(u(x))`. Throws UnguardedError.
Kleisli<Tree> solve_guarded(const Resumption& r, const Kleisli<Tree>& f);

/// Iteration of an arbitrary `f : X -> T_Σ(Y + X)`:
/// `out f†(x) = T(id + Σ[η^ν, f†]‡‡)((Tπ ∘ out ∘ f)†(x))`.
Kleisli<Tree> iterate_res(const Resumption& r, const Kleisli<Tree>& f);

}  // namespace elgot
