#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace elgot {

class MValue;
class TreeNode;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Root of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value or morphism was used at a carrier it does not belong to.
class CarrierMismatch : public Error {
 public:
  using Error::Error;
};

/// An instance or environment was configured inconsistently.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Source text did not match the expected grammar.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A well-formed program referred to something that is not defined.
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// An operation interpretation does not fit the signature it handles.
class InterpretationError : public Error {
 public:
  using Error::Error;
};

/// A process specification file is malformed.
class LoadError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Value
// ---------------------------------------------------------------------------

/// Immutable first-order term used as the element type of every carrier.
///
/// Atoms are interned strings ordered by their text. Sums, pairs and
/// operation nodes are built structurally. Tree values refer to a node of a
/// resumption tree and compare by the node's identity token only. Layer and
/// cut values occur inside truncated trees.
class Value {
 public:
  enum class Kind : std::uint8_t { atom, inl, inr, pair, op, tree, layer, cut };

  using Children = std::vector<std::pair<Value, Value>>;

  Value() = default;

  static Value atom(std::string_view name);
  static Value inl(Value v);
  static Value inr(Value v);
  static Value pair(Value first, Value second);
  /// Operation node `name(param; key -> child ...)`; children are sorted by key.
  static Value op(std::string_view name, Value param, Children children);
  static Value tree(std::shared_ptr<const TreeNode> node, std::uint64_t id);
  static Value layer(const MValue& layer);
  static Value cut();

  bool valid() const { return rep_ != nullptr; }
  Kind kind() const;
  bool is(Kind k) const { return valid() && kind() == k; }
  bool is_inl() const { return is(Kind::inl); }
  bool is_inr() const { return is(Kind::inr); }

  /// Name of an atom or operation.
  std::string_view name() const;
  /// Payload of an injection.
  const Value& payload() const;
  const Value& first() const;
  const Value& second() const;
  const Value& param() const;
  const Children& children() const;
  /// Child of an operation node at the given arity position.
  const Value& child(const Value& key) const;
  /// Same operation with children replaced (keys must be unchanged).
  Value with_children(Children children) const;

  const std::shared_ptr<const TreeNode>& node() const;
  std::uint64_t tree_id() const;
  const MValue& layer_value() const;

  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Value& a, const Value& b);
  friend bool operator==(const Value& a, const Value& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  struct Rep;
  explicit Value(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  const Rep& rep() const;

  std::shared_ptr<const Rep> rep_;
};

/// The single element `*` of the terminal carrier.
Value unit_value();

// ---------------------------------------------------------------------------
// Carrier
// ---------------------------------------------------------------------------

/// A named, enumerable finite set of values.
///
/// Sum and product carriers remember their components. An opaque carrier
/// admits any value and enumerates nothing; it types intermediate results
/// whose elements include tree tokens.
class Carrier {
 public:
  enum class Shape : std::uint8_t { plain, sum, product, opaque };

  Carrier();

  /// Carrier of atoms; throws ConfigError on duplicates.
  static Carrier atoms(std::string name, const std::vector<std::string>& atoms);
  static Carrier of(std::string name, std::vector<Value> elements);
  /// Atoms `prefix0 .. prefix{n-1}`.
  static Carrier numbered(std::string name, const std::string& prefix, std::size_t n);
  static Carrier unit();
  static Carrier empty(std::string name = "0");
  static Carrier sum(const Carrier& left, const Carrier& right);
  static Carrier product(const Carrier& left, const Carrier& right);
  static Carrier opaque(std::string name);

  const std::string& name() const;
  Shape shape() const;
  const std::vector<Value>& elements() const;
  std::size_t size() const { return elements().size(); }
  bool contains(const Value& v) const;
  /// Position of an element in enumeration order.
  std::size_t index_of(const Value& v) const;

  /// Components of a sum or product carrier.
  const Carrier& left() const;
  const Carrier& right() const;

  friend bool operator==(const Carrier& a, const Carrier& b);

  struct Rep;

 private:
  explicit Carrier(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  std::shared_ptr<const Rep> rep_;
};

/// Throws CarrierMismatch naming both carriers unless they are equal.
void require_same_carrier(const Carrier& expected, const Carrier& actual,
                          std::string_view context);

}  // namespace elgot
