#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elgot/base_monads.hpp"
#include "elgot/kleisli.hpp"
#include "elgot/mvalue.hpp"
#include "elgot/value.hpp"

namespace elgot {

/// Operation `name : param × X^arity -> X`.
struct OpDesc {
  std::string name;
  Carrier param;
  Carrier arity;
};

/// Finite signature `Σ X = Σ_i a_i × X^{b_i}`.
class Signature {
 public:
  Signature() = default;
  /// Throws ConfigError on duplicate names or empty carriers.
  explicit Signature(std::vector<OpDesc> ops);

  const std::vector<OpDesc>& ops() const { return ops_; }
  /// Throws InterpretationError for unknown names.
  const OpDesc& find(std::string_view name) const;
  bool has(std::string_view name) const;
  /// Checks that an operation node fits its descriptor.
  void validate(const Value& op) const;

 private:
  std::vector<OpDesc> ops_;
};

/// One node of a possibly infinite resumption tree.
///
/// The step `out(t)` is a base-monad value whose elements are `inl x`
/// (leaves) or `inr op` where the op's children are tree values. A node
/// created by `suspend` computes its step at most once.
class TreeNode {
 public:
  using Thunk = std::function<MValue()>;

  explicit TreeNode(Thunk thunk);
  explicit TreeNode(MValue step);

  std::uint64_t id() const { return id_; }
  const MValue& step() const;
  bool forced() const { return forced_.load(std::memory_order_acquire); }

 private:
  std::uint64_t id_;
  mutable std::once_flag once_;
  mutable Thunk thunk_;
  mutable MValue step_;
  mutable std::atomic<bool> forced_{false};
};

/// Handle on a tree node; copies share the node.
class Tree {
 public:
  /// `out⁻¹`: a node whose step is `step`.
  static Tree wrap(MValue step);
  /// A node whose step is computed on first observation.
  static Tree suspend(TreeNode::Thunk thunk);
  /// The tree referenced by a tree value.
  static Tree from_value(const Value& v);

  std::uint64_t id() const { return node_->id(); }
  /// `out`: forces the node.
  const MValue& out() const { return node_->step(); }
  Value as_value() const { return Value::tree(node_, node_->id()); }
  bool forced() const { return node_->forced(); }

  friend bool operator==(const Tree& a, const Tree& b) { return a.node_ == b.node_; }

 private:
  explicit Tree(std::shared_ptr<const TreeNode> node) : node_(std::move(node)) {}

  std::shared_ptr<const TreeNode> node_;
};

/// The coinductive resumption monad `T_Σ X = νγ. T(X + Σγ)` over a base
/// monad, with equality taken as bisimilarity up to a fixed depth.
class Resumption {
 public:
  using value_type = Tree;

  Resumption(BaseMonad base, Signature sig, std::size_t depth = 6);

  const BaseMonad& base() const { return base_; }
  const Signature& signature() const { return sig_; }
  std::size_t depth() const { return depth_; }
  Resumption with_depth(std::size_t depth) const { return Resumption(base_, sig_, depth); }

  /// `η^ν = out⁻¹ ∘ η ∘ inl`.
  Tree eta(const Value& x) const;
  /// Kleisli lifting, lazily: `out ∘ f‡‡ = [out ∘ f, η ∘ inr ∘ Σ f‡‡]* ∘ out`.
  Tree bind(const Tree& t, const Cont<Tree>& f) const;
  /// The lifting `f‡‡` as a reusable function; results are memoized per
  /// node so that cyclic trees lift to cyclic trees.
  std::function<Tree(const Tree&)> lifter(Cont<Tree> f) const;
  Tree map(const Tree& t, const PureFn& h) const;
  /// `τ^ν(c, t)`, pairing `c` into every leaf.
  Tree strength(const Value& c, const Tree& t) const;
  /// Unguarded iteration `f† = (f‡)†` (see resumption_iteration.hpp).
  Kleisli<Tree> iterate(const Kleisli<Tree>& f) const;
  bool equal(const Tree& a, const Tree& b) const;
  std::string render(const Tree& t) const;

  /// `ext = out⁻¹ ∘ T inl`.
  Tree ext(const MValue& m) const;
  /// `ι = out⁻¹ ∘ η ∘ inr ∘ Ση^ν` on an operation whose children are leaves.
  Tree iota(const Value& op) const;
  /// Single operation layer over the given subtrees.
  Tree node(std::string_view op, const Value& param,
            const std::vector<std::pair<Value, Tree>>& children) const;
  /// `out⁻¹(⊥)`: unproductive divergence, the deadlocked tree.
  Tree bottom() const { return Tree::wrap(base_.bottom()); }

 private:
  BaseMonad base_;
  Signature sig_;
  std::size_t depth_;
};

/// Final morphism of a coalgebra `g : Y -> T(X + ΣY)` whose operation
/// children are seeds in `Y`; one node per seed.
Kleisli<Tree> coit(const Resumption& r, const Kleisli<MValue>& g);

/// Truncation below `depth` operation layers. Elements of the result are
/// `inl x` (leaf), `cut`, or an op whose children are `layer` values.
MValue truncate(const Resumption& r, const Tree& t, std::size_t depth);

bool bisimilar(const Resumption& r, const Tree& a, const Tree& b, std::size_t depth);

/// Canonical text of a truncation: `(leaf x)`, `(cut)`,
/// `(op name param (key layer) ...)`, with layers rendered by the base.
std::string render_truncation(const BaseMonad& base, const MValue& layer);

std::string render_tree(const Resumption& r, const Tree& t, std::size_t depth);

/// Reads a finite tree in the canonical text format (`(cut)` is rejected).
/// Throws SyntaxError on malformed text and ConfigError on values that do
/// not fit the base monad or the signature.
Tree parse_tree(const Resumption& r, std::string_view text);

}  // namespace elgot
