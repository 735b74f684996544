#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "elgot/value.hpp"

namespace elgot {

/// A value of one of the closed family of base monads, in canonical form.
///
/// Every kind stores rows of sorted, duplicate-free elements:
///   maybe  - one row with zero (`nothing`) or one (`just`) element;
///   finset - one row holding the set;
///   nondet - one row per state of the instance, each holding
///            `pair(result, successor state)` elements.
class MValue {
 public:
  enum class Kind : std::uint8_t { maybe, finset, nondet };

  /// `nothing`.
  MValue();
  MValue(Kind kind, std::vector<std::vector<Value>> rows);

  Kind kind() const { return kind_; }
  const std::vector<std::vector<Value>>& rows() const { return rows_; }
  /// True when every row is empty (the least element).
  bool is_bottom() const;

  friend std::strong_ordering operator<=>(const MValue& a, const MValue& b);
  friend bool operator==(const MValue& a, const MValue& b) {
    return a.kind_ == b.kind_ && a.rows_ == b.rows_;
  }

 private:
  Kind kind_;
  std::vector<std::vector<Value>> rows_;
};

}  // namespace elgot
