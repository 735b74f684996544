#include "elgot/value.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_set>

#include "elgot/mvalue.hpp"

namespace elgot {

namespace {

const std::string* intern(std::string_view text) {
  static std::mutex mu;
  static std::unordered_set<std::string> table;
  std::lock_guard<std::mutex> lock(mu);
  return &*table.emplace(text).first;
}

std::strong_ordering compare_text(const std::string* a, const std::string* b) {
  if (a == b) return std::strong_ordering::equal;
  int c = a->compare(*b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

struct Value::Rep {
  Kind kind = Kind::atom;
  const std::string* text = nullptr;
  Value a;
  Value b;
  Children children;
  std::shared_ptr<const TreeNode> node;
  std::uint64_t id = 0;
  std::shared_ptr<const MValue> layer;
};

Value Value::atom(std::string_view name) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::atom;
  r->text = intern(name);
  return Value(std::move(r));
}

Value Value::inl(Value v) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::inl;
  r->a = std::move(v);
  return Value(std::move(r));
}

Value Value::inr(Value v) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::inr;
  r->a = std::move(v);
  return Value(std::move(r));
}

Value Value::pair(Value first, Value second) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::pair;
  r->a = std::move(first);
  r->b = std::move(second);
  return Value(std::move(r));
}

Value Value::op(std::string_view name, Value param, Children children) {
  std::sort(children.begin(), children.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 1; i < children.size(); ++i) {
    if (children[i - 1].first == children[i].first) {
      throw ConfigError("operation " + std::string(name) + " has duplicate child key " +
                        children[i].first.to_string());
    }
  }
  auto r = std::make_shared<Rep>();
  r->kind = Kind::op;
  r->text = intern(name);
  r->a = std::move(param);
  r->children = std::move(children);
  return Value(std::move(r));
}

Value Value::tree(std::shared_ptr<const TreeNode> node, std::uint64_t id) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::tree;
  r->node = std::move(node);
  r->id = id;
  return Value(std::move(r));
}

Value Value::layer(const MValue& layer) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::layer;
  r->layer = std::make_shared<const MValue>(layer);
  return Value(std::move(r));
}

Value Value::cut() {
  static const Value c = [] {
    auto r = std::make_shared<Rep>();
    r->kind = Kind::cut;
    return Value(std::move(r));
  }();
  return c;
}

const Value::Rep& Value::rep() const {
  if (!rep_) throw Error("use of an empty value");
  return *rep_;
}

Value::Kind Value::kind() const { return rep().kind; }

std::string_view Value::name() const {
  const Rep& r = rep();
  if (r.kind != Kind::atom && r.kind != Kind::op) throw Error("value has no name: " + to_string());
  return *r.text;
}

const Value& Value::payload() const {
  const Rep& r = rep();
  if (r.kind != Kind::inl && r.kind != Kind::inr) {
    throw CarrierMismatch("expected an injection, got " + to_string());
  }
  return r.a;
}

const Value& Value::first() const {
  const Rep& r = rep();
  if (r.kind != Kind::pair) throw CarrierMismatch("expected a pair, got " + to_string());
  return r.a;
}

const Value& Value::second() const {
  const Rep& r = rep();
  if (r.kind != Kind::pair) throw CarrierMismatch("expected a pair, got " + to_string());
  return r.b;
}

const Value& Value::param() const {
  const Rep& r = rep();
  if (r.kind != Kind::op) throw CarrierMismatch("expected an operation, got " + to_string());
  return r.a;
}

const Value::Children& Value::children() const {
  const Rep& r = rep();
  if (r.kind != Kind::op) throw CarrierMismatch("expected an operation, got " + to_string());
  return r.children;
}

const Value& Value::child(const Value& key) const {
  for (const auto& [k, c] : children()) {
    if (k == key) return c;
  }
  throw InterpretationError("operation " + std::string(name()) + " has no child at " +
                            key.to_string());
}

Value Value::with_children(Children children) const {
  return op(name(), param(), std::move(children));
}

const std::shared_ptr<const TreeNode>& Value::node() const {
  const Rep& r = rep();
  if (r.kind != Kind::tree) throw CarrierMismatch("expected a tree, got " + to_string());
  return r.node;
}

std::uint64_t Value::tree_id() const {
  const Rep& r = rep();
  if (r.kind != Kind::tree) throw CarrierMismatch("expected a tree, got " + to_string());
  return r.id;
}

const MValue& Value::layer_value() const {
  const Rep& r = rep();
  if (r.kind != Kind::layer) throw CarrierMismatch("expected a layer, got " + to_string());
  return *r.layer;
}

std::string Value::to_string() const {
  if (!rep_) return "<empty>";
  const Rep& r = *rep_;
  switch (r.kind) {
    case Kind::atom:
      return *r.text;
    case Kind::inl:
      return "(inl " + r.a.to_string() + ")";
    case Kind::inr:
      return "(inr " + r.a.to_string() + ")";
    case Kind::pair:
      return "(pair " + r.a.to_string() + " " + r.b.to_string() + ")";
    case Kind::op: {
      std::string s = "(op " + *r.text + " " + r.a.to_string();
      for (const auto& [k, c] : r.children) s += " (" + k.to_string() + " " + c.to_string() + ")";
      return s + ")";
    }
    case Kind::tree:
      return "#" + std::to_string(r.id);
    case Kind::layer:
      return "<layer>";
    case Kind::cut:
      return "(cut)";
  }
  return "?";
}

std::strong_ordering operator<=>(const Value& x, const Value& y) {
  if (x.rep_ == y.rep_) return std::strong_ordering::equal;
  if (!x.rep_) return std::strong_ordering::less;
  if (!y.rep_) return std::strong_ordering::greater;
  const Value::Rep& a = *x.rep_;
  const Value::Rep& b = *y.rep_;
  if (a.kind != b.kind) return a.kind <=> b.kind;
  switch (a.kind) {
    case Value::Kind::atom:
      return compare_text(a.text, b.text);
    case Value::Kind::inl:
    case Value::Kind::inr:
      return a.a <=> b.a;
    case Value::Kind::pair:
      if (auto c = a.a <=> b.a; c != 0) return c;
      return a.b <=> b.b;
    case Value::Kind::op: {
      if (auto c = compare_text(a.text, b.text); c != 0) return c;
      if (auto c = a.a <=> b.a; c != 0) return c;
      const std::size_t n = std::min(a.children.size(), b.children.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (auto c = a.children[i].first <=> b.children[i].first; c != 0) return c;
        if (auto c = a.children[i].second <=> b.children[i].second; c != 0) return c;
      }
      return a.children.size() <=> b.children.size();
    }
    case Value::Kind::tree:
      return a.id <=> b.id;
    case Value::Kind::layer:
      return *a.layer <=> *b.layer;
    case Value::Kind::cut:
      return std::strong_ordering::equal;
  }
  return std::strong_ordering::equal;
}

Value unit_value() {
  static const Value u = Value::atom("*");
  return u;
}

// ---------------------------------------------------------------------------
// MValue
// ---------------------------------------------------------------------------

MValue::MValue() : kind_(Kind::maybe), rows_(1) {}

MValue::MValue(Kind kind, std::vector<std::vector<Value>> rows)
    : kind_(kind), rows_(std::move(rows)) {
  for (auto& row : rows_) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  if (kind_ != Kind::nondet && rows_.size() != 1) {
    throw Error("maybe and finset values have exactly one row");
  }
  if (kind_ == Kind::maybe && rows_[0].size() > 1) {
    throw Error("a maybe value holds at most one element");
  }
}

bool MValue::is_bottom() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const auto& r) { return r.empty(); });
}

std::strong_ordering operator<=>(const MValue& a, const MValue& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  const std::size_t n = std::min(a.rows_.size(), b.rows_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ra = a.rows_[i];
    const auto& rb = b.rows_[i];
    const std::size_t m = std::min(ra.size(), rb.size());
    for (std::size_t j = 0; j < m; ++j) {
      if (auto c = ra[j] <=> rb[j]; c != 0) return c;
    }
    if (ra.size() != rb.size()) return ra.size() <=> rb.size();
  }
  return a.rows_.size() <=> b.rows_.size();
}

// ---------------------------------------------------------------------------
// Carrier
// ---------------------------------------------------------------------------

struct Carrier::Rep {
  std::string name;
  Shape shape = Shape::plain;
  std::vector<Value> elements;
  std::map<Value, std::size_t> index;
  std::vector<Carrier> parts;
};

namespace {

std::shared_ptr<Carrier::Rep> make_plain(std::string name, std::vector<Value> elements) {
  auto r = std::make_shared<Carrier::Rep>();
  r->name = std::move(name);
  r->elements = std::move(elements);
  for (std::size_t i = 0; i < r->elements.size(); ++i) {
    if (!r->index.emplace(r->elements[i], i).second) {
      throw ConfigError("carrier " + r->name + " lists " + r->elements[i].to_string() + " twice");
    }
  }
  return r;
}

}  // namespace

Carrier::Carrier() : rep_(make_plain("0", {})) {}

Carrier Carrier::atoms(std::string name, const std::vector<std::string>& atoms) {
  std::vector<Value> elements;
  elements.reserve(atoms.size());
  for (const auto& a : atoms) elements.push_back(Value::atom(a));
  return Carrier(make_plain(std::move(name), std::move(elements)));
}

Carrier Carrier::of(std::string name, std::vector<Value> elements) {
  return Carrier(make_plain(std::move(name), std::move(elements)));
}

Carrier Carrier::numbered(std::string name, const std::string& prefix, std::size_t n) {
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(prefix + std::to_string(i));
  return Carrier::atoms(std::move(name), atoms);
}

Carrier Carrier::unit() {
  static const Carrier u = Carrier::of("1", {unit_value()});
  return u;
}

Carrier Carrier::empty(std::string name) { return Carrier(make_plain(std::move(name), {})); }

Carrier Carrier::sum(const Carrier& left, const Carrier& right) {
  std::vector<Value> elements;
  for (const auto& v : left.elements()) elements.push_back(Value::inl(v));
  for (const auto& v : right.elements()) elements.push_back(Value::inr(v));
  auto r = make_plain("(" + left.name() + "+" + right.name() + ")", std::move(elements));
  r->shape = Shape::sum;
  r->parts = {left, right};
  return Carrier(std::move(r));
}

Carrier Carrier::product(const Carrier& left, const Carrier& right) {
  std::vector<Value> elements;
  for (const auto& a : left.elements()) {
    for (const auto& b : right.elements()) elements.push_back(Value::pair(a, b));
  }
  auto r = make_plain("(" + left.name() + "*" + right.name() + ")", std::move(elements));
  r->shape = Shape::product;
  r->parts = {left, right};
  return Carrier(std::move(r));
}

Carrier Carrier::opaque(std::string name) {
  auto r = make_plain(std::move(name), {});
  r->shape = Shape::opaque;
  return Carrier(std::move(r));
}

const std::string& Carrier::name() const { return rep_->name; }
Carrier::Shape Carrier::shape() const { return rep_->shape; }
const std::vector<Value>& Carrier::elements() const { return rep_->elements; }

bool Carrier::contains(const Value& v) const {
  switch (rep_->shape) {
    case Shape::opaque:
      return true;
    case Shape::sum:
      if (v.is_inl()) return left().contains(v.payload());
      if (v.is_inr()) return right().contains(v.payload());
      return false;
    case Shape::product:
      return v.is(Value::Kind::pair) && left().contains(v.first()) && right().contains(v.second());
    case Shape::plain:
      return rep_->index.count(v) != 0;
  }
  return false;
}

std::size_t Carrier::index_of(const Value& v) const {
  auto it = rep_->index.find(v);
  if (it == rep_->index.end()) {
    throw CarrierMismatch(v.to_string() + " is not an element of " + name());
  }
  return it->second;
}

const Carrier& Carrier::left() const {
  if (rep_->parts.size() != 2) throw CarrierMismatch("carrier " + name() + " is not a sum or product");
  return rep_->parts[0];
}

const Carrier& Carrier::right() const {
  if (rep_->parts.size() != 2) throw CarrierMismatch("carrier " + name() + " is not a sum or product");
  return rep_->parts[1];
}

bool operator==(const Carrier& a, const Carrier& b) {
  if (a.rep_ == b.rep_) return true;
  return a.rep_->shape == b.rep_->shape && a.rep_->name == b.rep_->name &&
         a.rep_->elements == b.rep_->elements;
}

void require_same_carrier(const Carrier& expected, const Carrier& actual,
                          std::string_view context) {
  if (!(expected == actual)) {
    throw CarrierMismatch("carrier mismatch in " + std::string(context) + ": expected " +
                          expected.name() + ", got " + actual.name());
  }
}

}  // namespace elgot
