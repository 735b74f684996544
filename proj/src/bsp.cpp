#include "elgot/bsp.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace elgot {

// ---------------------------------------------------------------------------
// Specification
// ---------------------------------------------------------------------------

void BspSpec::validate() const {
  if (actions.empty()) throw LoadError("no actions declared");
  std::set<std::string> labels(actions.begin(), actions.end());
  if (labels.size() != actions.size()) throw LoadError("duplicate action label");
  if (states == 0) throw LoadError("a specification needs at least one state");
  if (width.size() != states) {
    throw LoadError("width lists " + std::to_string(width.size()) + " entries for " + std::to_string(states) +
                    " states");
  }
  if (b.size() != states || j.size() != states) throw LoadError("tables b and j need one row per state");
  for (std::size_t i = 0; i < states; ++i) {
    if (b[i].size() != width[i]) {
      throw LoadError("b[" + std::to_string(i) + "] has " + std::to_string(b[i].size()) + " entries, width is " +
                      std::to_string(width[i]));
    }
    if (j[i].size() != width[i]) {
      throw LoadError("j[" + std::to_string(i) + "] has " + std::to_string(j[i].size()) + " entries, width is " +
                      std::to_string(width[i]));
    }
    for (std::size_t k = 0; k < width[i]; ++k) {
      if (!labels.count(b[i][k])) {
        throw LoadError("b[" + std::to_string(i) + "][" + std::to_string(k) + "] = " + b[i][k] +
                        " is not a declared action");
      }
      if (j[i][k] >= states) {
        throw LoadError("j[" + std::to_string(i) + "][" + std::to_string(k) + "] = " + std::to_string(j[i][k]) +
                        " is out of range");
      }
    }
  }
}

std::size_t BspSpec::max_width() const {
  return width.empty() ? 0 : *std::max_element(width.begin(), width.end());
}

namespace {

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::size_t to_index(const std::string& s, const std::string& context) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw LoadError(context + ": expected a non-negative integer, got '" + s + "'");
  }
  try {
    return static_cast<std::size_t>(std::stoull(s));
  } catch (const std::out_of_range&) {
    throw LoadError(context + ": integer out of range");
  }
}

}  // namespace

BspSpec parse_bsp_text(std::string_view text) {
  BspSpec spec;
  std::map<std::size_t, std::vector<std::string>> b_rows;
  std::map<std::size_t, std::vector<std::size_t>> j_rows;
  bool have_states = false, have_width = false;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (words(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw LoadError(where + ": expected 'key = value'");
    auto key_words = words(line.substr(0, eq));
    if (key_words.size() != 1) throw LoadError(where + ": malformed key");
    const std::string key = key_words[0];
    const auto vals = words(line.substr(eq + 1));

    if (key == "actions") {
      spec.actions = vals;
    } else if (key == "states") {
      if (vals.size() != 1) throw LoadError(where + ": states takes one count");
      spec.states = to_index(vals[0], where);
      have_states = true;
    } else if (key == "width") {
      spec.width.clear();
      for (const auto& v : vals) spec.width.push_back(to_index(v, where));
      have_width = true;
    } else if ((key[0] == 'b' || key[0] == 'j') && key.size() > 3 && key[1] == '[' && key.back() == ']') {
      std::size_t i = to_index(key.substr(2, key.size() - 3), where);
      if (key[0] == 'b') {
        if (!b_rows.emplace(i, vals).second) throw LoadError(where + ": " + key + " given twice");
      } else {
        std::vector<std::size_t> row;
        for (const auto& v : vals) row.push_back(to_index(v, where));
        if (!j_rows.emplace(i, row).second) throw LoadError(where + ": " + key + " given twice");
      }
    } else {
      throw LoadError(where + ": unknown key '" + key + "'");
    }
  }
  if (!have_states) throw LoadError("missing 'states'");
  if (!have_width) throw LoadError("missing 'width'");
  spec.b.assign(spec.states, {});
  spec.j.assign(spec.states, {});
  for (auto& [i, row] : b_rows) {
    if (i >= spec.states) throw LoadError("row b[" + std::to_string(i) + "] is out of range");
    spec.b[i] = row;
  }
  for (auto& [i, row] : j_rows) {
    if (i >= spec.states) throw LoadError("row j[" + std::to_string(i) + "] is out of range");
    spec.j[i] = row;
  }
  spec.validate();
  return spec;
}

BspSpec parse_bsp_json(std::string_view text) {
  BspSpec spec;
  try {
    auto doc = nlohmann::json::parse(text);
    spec.actions = doc.at("actions").get<std::vector<std::string>>();
    spec.states = doc.at("states").get<std::size_t>();
    spec.width = doc.at("width").get<std::vector<std::size_t>>();
    spec.b = doc.at("b").get<std::vector<std::vector<std::string>>>();
    spec.j = doc.at("j").get<std::vector<std::vector<std::size_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("malformed JSON specification: ") + e.what());
  }
  spec.validate();
  return spec;
}

BspSpec parse_bsp(std::string_view text) {
  auto first = std::find_if(text.begin(), text.end(), [](unsigned char c) { return !std::isspace(c); });
  if (first != text.end() && *first == '{') return parse_bsp_json(text);
  return parse_bsp_text(text);
}

BspSpec load_bsp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_bsp(buf.str());
}

// ---------------------------------------------------------------------------
// Equations
// ---------------------------------------------------------------------------

Resumption bsp_monad(const BspSpec& spec, std::size_t depth) {
  Carrier labels = Carrier::atoms("a", spec.actions);
  return Resumption(BaseMonad::finset(), Signature({{"act", labels, Carrier::unit()}}), depth);
}

Carrier bsp_variables(const BspSpec& spec) {
  return Carrier::product(Carrier::numbered("N", "", spec.states), Carrier::numbered("K", "", spec.max_width() + 1));
}

Value bsp_variable(std::size_t i, std::size_t k) {
  return Value::pair(Value::atom(std::to_string(i)), Value::atom(std::to_string(k)));
}

Kleisli<Tree> build_equations(const Resumption& r, const BspSpec& spec) {
  spec.validate();
  Carrier vars = bsp_variables(spec);
  Carrier cod = Carrier::sum(Carrier::empty(), vars);
  return Kleisli<Tree>(vars, cod, [r, spec](const Value& v) {
    std::size_t i = std::stoul(std::string(v.first().name()));
    std::size_t k = std::stoul(std::string(v.second().name()));
    if (k >= spec.width[i]) return Tree::wrap(r.base().bottom());
    Tree next = r.eta(Value::inr(bsp_variable(spec.j[i][k], 0)));
    Value step = Value::op("act", Value::atom(spec.b[i][k]), {{unit_value(), next.as_value()}});
    return Tree::wrap(r.base().choice({Value::inr(step), Value::inl(Value::inr(bsp_variable(i, k + 1)))}));
  });
}

// ---------------------------------------------------------------------------
// Unfolding
// ---------------------------------------------------------------------------

std::set<std::tuple<std::size_t, std::string, std::size_t>> Lts::state_edges() const {
  std::set<std::tuple<std::size_t, std::string, std::size_t>> out;
  for (const auto& e : edges) {
    if (nodes[e.src].state && nodes[e.dst].state) out.emplace(*nodes[e.src].state, e.label, *nodes[e.dst].state);
  }
  return out;
}

std::string Lts::to_dot() const {
  std::string out = "digraph {\n";
  for (std::size_t r : roots) out += "  " + nodes[r].name + " [shape=doublecircle];\n";
  for (const auto& e : edges) {
    out += "  " + nodes[e.src].name + " -> " + nodes[e.dst].name + " [label=\"" + e.label + "\"];\n";
  }
  return out + "}\n";
}

std::string Lts::to_csv() const {
  std::string out = "src,label,dst\n";
  for (const auto& e : edges) out += nodes[e.src].name + "," + e.label + "," + nodes[e.dst].name + "\n";
  return out;
}

std::string Lts::to_text() const {
  std::string out;
  for (const auto& e : edges) out += nodes[e.src].name + " -" + e.label + "-> " + nodes[e.dst].name + "\n";
  return out;
}

Lts solve_and_unfold(const BspSpec& spec, std::size_t depth, std::optional<std::size_t> root) {
  spec.validate();
  if (root && *root >= spec.states) throw LoadError("root state " + std::to_string(*root) + " is out of range");
  Resumption r = bsp_monad(spec, depth);
  Kleisli<Tree> solution = iterate_res(r, build_equations(r, spec));

  // A subtree is recognised as state j when it is the solution node at
  // (j, 0), or failing that when its top layer coincides with that node's.
  std::map<std::uint64_t, std::size_t> node_of;
  std::map<MValue, std::size_t> signature_of;
  for (std::size_t i = 0; i < spec.states; ++i) {
    Tree t = solution(bsp_variable(i, 0));
    node_of.emplace(t.id(), i);
    signature_of.emplace(t.out(), i);
  }
  auto identify = [&](const Tree& t) -> std::optional<std::size_t> {
    if (auto it = node_of.find(t.id()); it != node_of.end()) return it->second;
    if (auto it = signature_of.find(t.out()); it != signature_of.end()) return it->second;
    return std::nullopt;
  };

  Lts lts;
  std::map<std::size_t, std::size_t> occurrences;
  std::size_t anonymous = 0;
  auto add_node = [&](const Tree& t, std::size_t d, bool is_root) {
    Lts::Node n;
    n.depth = d;
    if (auto state = identify(t)) {
      n.state = state;
      n.name = "s" + std::to_string(*state);
      if (!is_root) n.name += "_" + std::to_string(++occurrences[*state]);
    } else {
      n.name = "n" + std::to_string(++anonymous);
    }
    lts.nodes.push_back(n);
    return lts.nodes.size() - 1;
  };

  std::deque<std::pair<Tree, std::size_t>> queue;
  for (std::size_t i = 0; i < spec.states; ++i) {
    if (root && *root != i) continue;
    Tree t = solution(bsp_variable(i, 0));
    lts.roots.push_back(add_node(t, 0, true));
    queue.emplace_back(t, lts.roots.back());
  }
  while (!queue.empty()) {
    auto [t, id] = queue.front();
    queue.pop_front();
    if (lts.nodes[id].depth >= depth) continue;
    for (const auto& e : t.out().rows()[0]) {
      if (!e.is_inr()) continue;  // the result carrier is empty
      const Value& op = e.payload();
      Tree child = Tree::from_value(op.child(unit_value()));
      std::size_t c = add_node(child, lts.nodes[id].depth + 1, false);
      lts.edges.push_back({id, std::string(op.param().name()), c});
      queue.emplace_back(child, c);
    }
  }
  return lts;
}

}  // namespace elgot
