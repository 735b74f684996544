#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "elgot/resumption_iteration.hpp"

namespace elgot {

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

/// Abstract syntax of the while-language with actions.
struct Stmt {
  enum class Kind { skip, act, seq, branch, loop };

  Kind kind = Kind::skip;
  /// Action name for `act`, predicate name for `branch` and `loop`.
  std::string name;
  StmtPtr first;
  StmtPtr second;
  std::size_t line = 0;
  std::size_t column = 0;

  static StmtPtr skip();
  static StmtPtr act(std::string name);
  static StmtPtr seq(StmtPtr p, StmtPtr q);
  static StmtPtr branch(std::string pred, StmtPtr then_branch, StmtPtr else_branch);
  static StmtPtr loop(std::string pred, StmtPtr body);

  /// Fully parenthesized form, e.g. `(seq read (while true skip))`.
  std::string to_string() const;
};

/// Parses a program; `;` associates to the right. Throws SyntaxError.
StmtPtr parse_program(std::string_view source);

/// Interpretation of names over `T_Σ` with `Σ X = n × X + X^n`.
class Env {
 public:
  /// `read`, `write`, `true`, `false` and, for nondeterministic bases,
  /// `coin`, over the alphabet `{0, ..., alphabet-1}`.
  static Env standard(const BaseMonad& base, std::size_t alphabet = 8, std::size_t depth = 6);

  const Resumption& monad() const { return r_; }
  const Carrier& values() const { return values_; }
  /// `1 + 1`, with `inl *` read as false.
  const Carrier& truth() const { return truth_; }

  /// Throws CarrierMismatch unless `f : n -> T_Σ n`.
  void add_action(const std::string& name, Kleisli<Tree> f);
  /// Throws CarrierMismatch unless `f : n -> T_Σ(1 + 1)`.
  void add_predicate(const std::string& name, Kleisli<Tree> f);

  const Kleisli<Tree>& action(const std::string& name) const;
  const Kleisli<Tree>& predicate(const std::string& name) const;

 private:
  Env(Resumption r, Carrier values);

  Resumption r_;
  Carrier values_;
  Carrier truth_;
  std::map<std::string, Kleisli<Tree>> actions_;
  std::map<std::string, Kleisli<Tree>> predicates_;
};

/// Denotation `n -> T_Σ n`. Throws SemanticError on unknown names.
Kleisli<Tree> interpret(const StmtPtr& s, const Env& env);

/// Canonical rendering of the depth-`depth` truncation at `input`.
std::string run(const StmtPtr& s, const Env& env, const Value& input, std::size_t depth);

}  // namespace elgot
