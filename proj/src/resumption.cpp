#include "elgot/resumption.hpp"

#include <cctype>
#include <map>
#include <set>

namespace elgot {

namespace {

std::atomic<std::uint64_t> next_node_id{1};

}  // namespace

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

Signature::Signature(std::vector<OpDesc> ops) : ops_(std::move(ops)) {
  std::set<std::string> seen;
  for (const auto& op : ops_) {
    if (!seen.insert(op.name).second) throw ConfigError("operation " + op.name + " declared twice");
    if (op.param.size() == 0) throw ConfigError("operation " + op.name + " has an empty parameter carrier");
    if (op.arity.size() == 0) throw ConfigError("operation " + op.name + " has an empty arity carrier");
  }
}

const OpDesc& Signature::find(std::string_view name) const {
  for (const auto& op : ops_) {
    if (op.name == name) return op;
  }
  throw InterpretationError("unknown operation '" + std::string(name) + "'");
}

bool Signature::has(std::string_view name) const {
  for (const auto& op : ops_) {
    if (op.name == name) return true;
  }
  return false;
}

void Signature::validate(const Value& op) const {
  const OpDesc& d = find(op.name());
  if (!d.param.contains(op.param())) {
    throw ConfigError("parameter " + op.param().to_string() + " of " + d.name + " is not in " +
                      d.param.name());
  }
  const auto& ch = op.children();
  if (ch.size() != d.arity.size()) {
    throw ConfigError("operation " + d.name + " needs " + std::to_string(d.arity.size()) +
                      " children, got " + std::to_string(ch.size()));
  }
  for (const auto& [k, c] : ch) {
    if (!d.arity.contains(k)) {
      throw ConfigError("child key " + k.to_string() + " of " + d.name + " is not in " + d.arity.name());
    }
  }
}

// ---------------------------------------------------------------------------
// Nodes
// ---------------------------------------------------------------------------

TreeNode::TreeNode(Thunk thunk) : id_(next_node_id.fetch_add(1)), thunk_(std::move(thunk)) {}

TreeNode::TreeNode(MValue step) : id_(next_node_id.fetch_add(1)), step_(std::move(step)) {
  std::call_once(once_, [] {});
  forced_.store(true, std::memory_order_release);
}

const MValue& TreeNode::step() const {
  std::call_once(once_, [this] {
    step_ = thunk_();
    thunk_ = nullptr;
    forced_.store(true, std::memory_order_release);
  });
  return step_;
}

Tree Tree::wrap(MValue step) { return Tree(std::make_shared<const TreeNode>(std::move(step))); }

Tree Tree::suspend(TreeNode::Thunk thunk) {
  return Tree(std::make_shared<const TreeNode>(std::move(thunk)));
}

Tree Tree::from_value(const Value& v) { return Tree(v.node()); }

// ---------------------------------------------------------------------------
// Monad structure
// ---------------------------------------------------------------------------

Resumption::Resumption(BaseMonad base, Signature sig, std::size_t depth)
    : base_(std::move(base)), sig_(std::move(sig)), depth_(depth) {}

Tree Resumption::eta(const Value& x) const { return Tree::wrap(base_.eta(Value::inl(x))); }

namespace {

/// Rebuilds an op value with each child tree transformed by `fn`.
template <class Fn>
Value map_children(const Value& op, Fn&& fn) {
  Value::Children out;
  out.reserve(op.children().size());
  for (const auto& [k, c] : op.children()) out.emplace_back(k, fn(Tree::from_value(c)).as_value());
  return op.with_children(std::move(out));
}

}  // namespace

std::function<Tree(const Tree&)> Resumption::lifter(Cont<Tree> f) const {
  struct State {
    State(BaseMonad b, Cont<Tree> k) : base(std::move(b)), f(std::move(k)) {}
    BaseMonad base;
    Cont<Tree> f;
    std::mutex mu;
    std::map<std::uint64_t, Tree> memo;
  };
  auto st = std::make_shared<State>(base_, std::move(f));
  // The lifting refers to itself weakly; unforced nodes keep it alive.
  auto lift = std::make_shared<std::function<Tree(const Tree&)>>();
  std::weak_ptr<std::function<Tree(const Tree&)>> weak = lift;
  *lift = [st, weak](const Tree& t) -> Tree {
    {
      std::lock_guard<std::mutex> lock(st->mu);
      auto it = st->memo.find(t.id());
      if (it != st->memo.end()) return it->second;
    }
    auto self = weak.lock();
    Tree result = Tree::suspend([st, t, self]() {
      return st->base.bind(t.out(), [&](const Value& e) {
        if (e.is_inl()) return st->f(e.payload()).out();
        return st->base.eta(Value::inr(map_children(e.payload(), *self)));
      });
    });
    std::lock_guard<std::mutex> lock(st->mu);
    return st->memo.emplace(t.id(), result).first->second;
  };
  return [lift](const Tree& t) { return (*lift)(t); };
}

Tree Resumption::bind(const Tree& t, const Cont<Tree>& f) const { return lifter(f)(t); }

Tree Resumption::map(const Tree& t, const PureFn& h) const {
  Resumption self = *this;
  return bind(t, [self, h](const Value& x) { return self.eta(h(x)); });
}

Tree Resumption::strength(const Value& c, const Tree& t) const {
  // Σ's strength pairs c into each child position, so τ^ν is T_Σ(c, -).
  return map(t, [c](const Value& x) { return Value::pair(c, x); });
}

bool Resumption::equal(const Tree& a, const Tree& b) const { return bisimilar(*this, a, b, depth_); }

std::string Resumption::render(const Tree& t) const { return render_tree(*this, t, depth_); }

Tree Resumption::ext(const MValue& m) const {
  return Tree::wrap(base_.map(m, [](const Value& x) { return Value::inl(x); }));
}

Tree Resumption::iota(const Value& op) const {
  sig_.validate(op);
  Value::Children ch;
  for (const auto& [k, x] : op.children()) ch.emplace_back(k, eta(x).as_value());
  return Tree::wrap(base_.eta(Value::inr(op.with_children(std::move(ch)))));
}

Tree Resumption::node(std::string_view op, const Value& param,
                      const std::vector<std::pair<Value, Tree>>& children) const {
  Value::Children ch;
  for (const auto& [k, t] : children) ch.emplace_back(k, t.as_value());
  Value v = Value::op(op, param, std::move(ch));
  sig_.validate(v);
  return Tree::wrap(base_.eta(Value::inr(v)));
}

namespace {

struct CoitState : std::enable_shared_from_this<CoitState> {
  Kleisli<MValue> g;
  BaseMonad base;
  std::mutex mu;
  std::map<Value, Tree> nodes;

  CoitState(Kleisli<MValue> g, BaseMonad base) : g(std::move(g)), base(std::move(base)) {}

  Tree seed(const Value& y) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = nodes.find(y);
    if (it != nodes.end()) return it->second;
    auto self = shared_from_this();
    Tree t = Tree::suspend([self, y]() {
      return self->base.map(self->g(y), [&](const Value& e) {
        if (e.is_inl()) return e;
        Value::Children ch;
        for (const auto& [key, next] : e.payload().children()) {
          ch.emplace_back(key, self->seed(next).as_value());
        }
        return Value::inr(e.payload().with_children(std::move(ch)));
      });
    });
    return nodes.emplace(y, t).first->second;
  }
};

}  // namespace

Kleisli<Tree> coit(const Resumption& r, const Kleisli<MValue>& g) {
  auto st = std::make_shared<CoitState>(g, r.base());
  Carrier cod = g.cod().shape() == Carrier::Shape::sum ? g.cod().left() : Carrier::opaque("X");
  return Kleisli<Tree>(g.dom(), cod, [st](const Value& y) { return st->seed(y); });
}

// ---------------------------------------------------------------------------
// Observation
// ---------------------------------------------------------------------------

namespace {

struct Truncator {
  const Resumption& r;
  std::map<std::pair<std::uint64_t, std::size_t>, MValue> memo;

  MValue operator()(const Tree& t, std::size_t depth) {
    auto key = std::make_pair(t.id(), depth);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    MValue layer = r.base().map(t.out(), [&](const Value& e) {
      if (e.is_inl()) return e;
      if (depth == 0) return Value::cut();
      Value::Children ch;
      for (const auto& [k, c] : e.payload().children()) {
        ch.emplace_back(k, Value::layer((*this)(Tree::from_value(c), depth - 1)));
      }
      return e.payload().with_children(std::move(ch));
    });
    return memo.emplace(key, std::move(layer)).first->second;
  }
};

}  // namespace

MValue truncate(const Resumption& r, const Tree& t, std::size_t depth) {
  Truncator tr{r, {}};
  return tr(t, depth);
}

bool bisimilar(const Resumption& r, const Tree& a, const Tree& b, std::size_t depth) {
  if (a == b) return true;
  Truncator tr{r, {}};
  return tr(a, depth) == tr(b, depth);
}

std::string render_truncation(const BaseMonad& base, const MValue& layer) {
  ElementRenderer element = [&](const Value& e) -> std::string {
    if (e.is_inl()) return "(leaf " + e.payload().to_string() + ")";
    if (e.is(Value::Kind::cut)) return "(cut)";
    std::string s = "(op " + std::string(e.name()) + " " + e.param().to_string();
    for (const auto& [k, c] : e.children()) {
      s += " (" + k.to_string() + " " + render_truncation(base, c.layer_value()) + ")";
    }
    return s + ")";
  };
  return base.render(layer, element);
}

std::string render_tree(const Resumption& r, const Tree& t, std::size_t depth) {
  return render_truncation(r.base(), truncate(r, t, depth));
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

class TreeParser {
 public:
  TreeParser(const Resumption& r, std::string_view text) : r_(r), text_(text) {}

  Tree parse() {
    Tree t = layer();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(what, line, col);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  static bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*';
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && word_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  Value value() {
    if (peek() != '(') return Value::atom(word());
    ++pos_;
    std::string tag = word();
    Value v;
    if (tag == "inl") {
      v = Value::inl(value());
    } else if (tag == "inr") {
      v = Value::inr(value());
    } else if (tag == "pair") {
      Value a = value();
      v = Value::pair(a, value());
    } else {
      fail("unknown value constructor '" + tag + "'");
    }
    expect(')');
    return v;
  }

  Value element() {
    expect('(');
    std::string tag = word();
    Value e;
    if (tag == "leaf") {
      e = Value::inl(value());
    } else if (tag == "op") {
      std::string name = word();
      Value param = value();
      Value::Children ch;
      while (peek() == '(') {
        ++pos_;
        Value key = value();
        ch.emplace_back(key, layer().as_value());
        expect(')');
      }
      Value op = Value::op(name, param, std::move(ch));
      r_.signature().validate(op);
      e = Value::inr(op);
    } else if (tag == "cut") {
      fail("truncated trees cannot be read back");
    } else {
      fail("unknown tree element '" + tag + "'");
    }
    expect(')');
    return e;
  }

  std::vector<Value> element_set(bool with_state) {
    expect('{');
    std::vector<Value> out;
    while (peek() != '}') {
      if (peek() == '\0') fail("unterminated set");
      Value e = element();
      if (with_state) {
        expect('@');
        Value s = value();
        if (!r_.base().states().contains(s)) fail("unknown state " + s.to_string());
        e = Value::pair(e, s);
      }
      out.push_back(e);
    }
    ++pos_;
    return out;
  }

  Tree layer() {
    const BaseMonad& base = r_.base();
    switch (base.kind()) {
      case MValue::Kind::maybe: {
        if (peek() != '(') {
          if (word() != "nothing") fail("expected 'nothing' or '(just ...)'");
          return Tree::wrap(base.bottom());
        }
        ++pos_;
        if (word() != "just") fail("expected 'just'");
        Value e = element();
        expect(')');
        return Tree::wrap(base.eta(e));
      }
      case MValue::Kind::finset:
        return Tree::wrap(MValue(MValue::Kind::finset, {element_set(false)}));
      case MValue::Kind::nondet: {
        expect('[');
        const auto& states = base.states().elements();
        std::vector<std::vector<Value>> rows(states.size());
        std::vector<bool> seen(states.size(), false);
        while (true) {
          Value s = value();
          if (!base.states().contains(s)) fail("unknown state " + s.to_string());
          std::size_t i = base.states().index_of(s);
          if (seen[i]) fail("state " + s.to_string() + " listed twice");
          seen[i] = true;
          expect(':');
          rows[i] = element_set(true);
          if (peek() == ';') {
            ++pos_;
            continue;
          }
          break;
        }
        expect(']');
        for (std::size_t i = 0; i < seen.size(); ++i) {
          if (!seen[i]) fail("state " + states[i].to_string() + " missing");
        }
        return Tree::wrap(MValue(MValue::Kind::nondet, std::move(rows)));
      }
    }
    fail("unsupported base monad");
  }

  const Resumption& r_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Tree parse_tree(const Resumption& r, std::string_view text) { return TreeParser(r, text).parse(); }

}  // namespace elgot
