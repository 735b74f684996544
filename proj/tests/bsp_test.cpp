#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <optional>
#include <random>

#include "elgot/bsp.hpp"

using namespace elgot;

namespace {

const char* kText =
    "actions = a b\n"
    "states = 2\n"
    "width = 2 1\n"
    "b[0] = a b\n"
    "j[0] = 1 0\n"
    "b[1] = a\n"
    "j[1] = 1\n";

/// Random specification whose rows never repeat a (label, target) pair.
BspSpec random_spec(std::mt19937_64& rng) {
  BspSpec s;
  s.actions = {"a", "b", "c"};
  s.states = 1 + rng() % 4;
  for (std::size_t i = 0; i < s.states; ++i) {
    std::vector<std::pair<std::string, std::size_t>> all;
    for (const auto& act : s.actions)
      for (std::size_t t = 0; t < s.states; ++t) all.emplace_back(act, t);
    std::shuffle(all.begin(), all.end(), rng);
    std::size_t w = rng() % 4;
    if (w > all.size()) w = all.size();
    s.width.push_back(w);
    s.b.emplace_back();
    s.j.emplace_back();
    for (std::size_t k = 0; k < w; ++k) {
      s.b[i].push_back(all[k].first);
      s.j[i].push_back(all[k].second);
    }
  }
  s.validate();
  return s;
}

/// Transitions of the unfolding from `i`, counted straight from the tables.
std::size_t edge_count(const BspSpec& s, std::size_t i, std::size_t depth) {
  if (depth == 0) return 0;
  std::size_t n = s.width[i];
  for (std::size_t k = 0; k < s.width[i]; ++k) n += edge_count(s, s.j[i][k], depth - 1);
  return n;
}

}  // namespace

TEST(BspLoad, TextAndJsonAgree) {
  BspSpec t = parse_bsp(kText);
  BspSpec j = parse_bsp(R"({"actions": ["a", "b"], "states": 2, "width": [2, 1],
                            "b": [["a", "b"], ["a"]], "j": [[1, 0], [1]]})");
  EXPECT_EQ(t.actions, j.actions);
  EXPECT_EQ(t.states, 2u);
  EXPECT_EQ(t.width, j.width);
  EXPECT_EQ(t.b, j.b);
  EXPECT_EQ(t.j, j.j);
  EXPECT_EQ(t.max_width(), 2u);
}

TEST(BspLoad, Rejections) {
  auto bad = [](const std::string& text) { EXPECT_THROW(parse_bsp(text), LoadError) << text; };
  bad("actions = a\nstates = 1\nwidth = 1\nb[0] = a\nj[0] = 3\n");
  bad("actions = a\nwidth = 1\nb[0] = a\nj[0] = 0\n");
  bad("actions = a\nstates = 1\nb[0] = a\nj[0] = 0\n");
  bad("actions = a\nstates = 1\nwidth = 2\nb[0] = a\nj[0] = 0\n");
  bad("actions = a\nstates = 1\nwidth = 1\nb[0] = z\nj[0] = 0\n");
  bad("actions = a\nstates = 1\nwidth = 1\nb[0] = a\nb[0] = a\nj[0] = 0\n");
  bad("actions = a\nstates = 1\nwidth = 1\nb[0] = a\nj[0] = -1\n");
  bad("actions = a a\nstates = 1\nwidth = 0\n");
  bad("actions = a\nstates = 1\nwidth = 0\nweight = 3\n");
  bad("states = 0\nwidth =\n");
  bad("{\"actions\": [\"a\"], \"states\": 1");
  bad("{\"actions\": [\"a\"], \"states\": 1, \"width\": [1], \"b\": [[\"a\"]]}");
  EXPECT_THROW(load_bsp("/nonexistent/spec.bsp"), LoadError);
  EXPECT_THROW(solve_and_unfold(parse_bsp(kText), 1, 5), LoadError);
}

TEST(BspEquations, Shape) {
  BspSpec s = parse_bsp(kText);
  Resumption r = bsp_monad(s);
  Kleisli<Tree> g = build_equations(r, s);
  const BaseMonad& fs = r.base();
  EXPECT_EQ(bsp_variables(s).size(), 2u * 3u);
  // X02 and X11 are 0.
  EXPECT_EQ(g(bsp_variable(0, 2)).out(), fs.bottom());
  EXPECT_EQ(g(bsp_variable(1, 1)).out(), fs.bottom());
  // X00 offers a guarded step and the bare alternative X01.
  std::vector<Value> layer = fs.support(g(bsp_variable(0, 0)).out());
  ASSERT_EQ(layer.size(), 2u);
  EXPECT_EQ(layer[0], Value::inl(Value::inr(bsp_variable(0, 1))));
  ASSERT_TRUE(layer[1].is_inr());
  EXPECT_EQ(layer[1].payload().param(), Value::atom("a"));
}

TEST(BspEquations, SingleDeadState) {
  BspSpec s = parse_bsp("actions = a\nstates = 1\nwidth = 0\n");
  Lts lts = solve_and_unfold(s, 4);
  EXPECT_EQ(lts.nodes.size(), 1u);
  EXPECT_TRUE(lts.edges.empty());
}

TEST(BspUnfold, DepthOneMatchesTheTable) {
  Lts lts = solve_and_unfold(parse_bsp(kText), 1);
  using E = std::tuple<std::size_t, std::string, std::size_t>;
  EXPECT_EQ(lts.state_edges(), (std::set<E>{{0, "a", 1}, {0, "b", 0}, {1, "a", 1}}));

  std::mt19937_64 rng(7);
  for (int n = 0; n < 60; ++n) {
    BspSpec s = random_spec(rng);
    // Dead states all denote 0 and are named after the least of them.
    std::optional<std::size_t> dead;
    for (std::size_t i = 0; i < s.states && !dead; ++i)
      if (s.width[i] == 0) dead = i;
    std::set<E> expected;
    for (std::size_t i = 0; i < s.states; ++i)
      for (std::size_t k = 0; k < s.width[i]; ++k) {
        std::size_t t = s.j[i][k];
        expected.emplace(i, s.b[i][k], s.width[t] == 0 ? *dead : t);
      }
    EXPECT_EQ(solve_and_unfold(s, 1).state_edges(), expected);
  }
}

TEST(BspUnfold, EdgeCountsFollowTheRecurrence) {
  BspSpec two = parse_bsp(kText);
  EXPECT_EQ(solve_and_unfold(two, 2, 0).edges.size(), 5u);
  EXPECT_EQ(edge_count(two, 0, 2), 5u);

  std::mt19937_64 rng(11);
  for (int n = 0; n < 40; ++n) {
    BspSpec s = random_spec(rng);
    for (std::size_t d = 1; d <= 3; ++d)
      for (std::size_t i = 0; i < s.states; ++i)
        EXPECT_EQ(solve_and_unfold(s, d, i).edges.size(), edge_count(s, i, d)) << "depth " << d << " root " << i;
  }
}

TEST(BspUnfold, DeepeningExtendsTheShallowUnfolding) {
  std::mt19937_64 rng(13);
  for (int n = 0; n < 20; ++n) {
    BspSpec s = random_spec(rng);
    std::map<std::tuple<std::string, std::string, std::string>, int> shallow, deep;
    Lts a = solve_and_unfold(s, 2, 0);
    Lts b = solve_and_unfold(s, 3, 0);
    for (const auto& e : a.edges) ++shallow[{a.nodes[e.src].name, e.label, a.nodes[e.dst].name}];
    for (const auto& e : b.edges) ++deep[{b.nodes[e.src].name, e.label, b.nodes[e.dst].name}];
    for (const auto& [edge, count] : shallow) EXPECT_LE(count, deep[edge]);
  }
}

TEST(BspUnfold, DeadStateHasNoEdges) {
  Lts lts = solve_and_unfold(parse_bsp("actions = a\nstates = 2\nwidth = 1 0\nb[0] = a\nj[0] = 1\n"), 3);
  for (const auto& e : lts.edges) EXPECT_NE(lts.nodes[e.src].state, std::optional<std::size_t>(1));
  EXPECT_EQ(lts.edges.size(), 1u);
}

TEST(BspFormats, Rendering) {
  Lts lts = solve_and_unfold(parse_bsp(kText), 1);
  EXPECT_EQ(lts.to_csv(), "src,label,dst\ns0,a,s1_1\ns0,b,s0_1\ns1,a,s1_2\n");
  EXPECT_EQ(lts.to_text(), "s0 -a-> s1_1\ns0 -b-> s0_1\ns1 -a-> s1_2\n");
  std::string dot = lts.to_dot();
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("s0 [shape=doublecircle];"), std::string::npos);
  EXPECT_NE(dot.find("s0 -> s0_1 [label=\"b\"];"), std::string::npos);
}
