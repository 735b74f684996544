#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "elgot/resumption_iteration.hpp"

namespace elgot {

/// Finite process definition
///
///   X_{i,k} = b[i][k] . X_{j[i][k],0} + X_{i,k+1}   (k < width[i])
///   X_{i,k} = 0                                     (k = width[i])
struct BspSpec {
  std::vector<std::string> actions;
  std::size_t states = 0;
  std::vector<std::size_t> width;
  std::vector<std::vector<std::string>> b;
  std::vector<std::vector<std::size_t>> j;

  /// Throws LoadError when the tables do not match the declared ranges.
  void validate() const;
  std::size_t max_width() const;
};

/// Reads the key/value text format (see README). Throws LoadError.
BspSpec parse_bsp_text(std::string_view text);
/// Reads the JSON format. Throws LoadError.
BspSpec parse_bsp_json(std::string_view text);
/// Chooses the format by content: JSON when the text starts with `{`.
BspSpec parse_bsp(std::string_view text);
BspSpec load_bsp(const std::string& path);

/// The resumption monad over FinSet with the single operation
/// `act : actions × X -> X`.
Resumption bsp_monad(const BspSpec& spec, std::size_t depth = 6);

/// Carrier `N × K` of equation variables `(i, k)`.
Carrier bsp_variables(const BspSpec& spec);
Value bsp_variable(std::size_t i, std::size_t k);

/// `g = out⁻¹ ∘ f : N×K -> T_Σ(0 + N×K)` with
/// `f(i,k) = {inr(b_ik, η^ν(j(i,k), 0)), inl(i, k+1)}` for `k < w_i` and
/// `∅` otherwise.
Kleisli<Tree> build_equations(const Resumption& r, const BspSpec& spec);

/// Depth-bounded unfolding of the solved system.
struct Lts {
  struct Node {
    std::string name;
    /// Equation state this node behaves as, when identified.
    std::optional<std::size_t> state;
    std::size_t depth = 0;
  };
  struct Edge {
    std::size_t src;
    std::string label;
    std::size_t dst;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::size_t> roots;

  /// Edges as `(state, label, state)` triples of identified nodes.
  std::set<std::tuple<std::size_t, std::string, std::size_t>> state_edges() const;

  std::string to_dot() const;
  std::string to_csv() const;
  std::string to_text() const;
};

/// Solves the system by unguarded iteration and unfolds the trees of
/// `(i, 0)` to `depth` transitions, for `root` or for every state.
Lts solve_and_unfold(const BspSpec& spec, std::size_t depth, std::optional<std::size_t> root = std::nullopt);

}  // namespace elgot
