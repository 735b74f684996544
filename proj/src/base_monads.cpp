#include "elgot/base_monads.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace elgot {

namespace {

std::vector<Value> set_union(const std::vector<Value>& a, const std::vector<Value>& b) {
  std::vector<Value> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool subset(const std::vector<Value>& a, const std::vector<Value>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

BaseMonad BaseMonad::maybe() { return BaseMonad(Kind::maybe, Carrier::unit()); }

BaseMonad BaseMonad::finset() { return BaseMonad(Kind::finset, Carrier::unit()); }

BaseMonad BaseMonad::nondet_state(const Carrier& states) {
  if (states.size() == 0) throw ConfigError("nondeterministic state monad needs at least one state");
  return BaseMonad(Kind::nondet, states);
}

std::string BaseMonad::name() const {
  switch (kind_) {
    case Kind::maybe:
      return "maybe";
    case Kind::finset:
      return "finset";
    case Kind::nondet:
      return "nondetstate" + states_.name();
  }
  return {};
}

void BaseMonad::check(const MValue& m) const {
  if (m.kind() != kind_) throw CarrierMismatch("value of a different monad passed to " + name());
  if (kind_ == Kind::nondet && m.rows().size() != states_.size()) {
    throw CarrierMismatch("state table of the wrong size passed to " + name());
  }
}

MValue BaseMonad::eta(const Value& x) const {
  if (kind_ != Kind::nondet) return MValue(kind_, {{x}});
  std::vector<std::vector<Value>> rows;
  for (const auto& s : states_.elements()) rows.push_back({Value::pair(x, s)});
  return MValue(kind_, std::move(rows));
}

MValue BaseMonad::bind(const MValue& m, const Cont<MValue>& k) const {
  check(m);
  if (kind_ == Kind::maybe) {
    if (m.rows()[0].empty()) return m;
    MValue r = k(m.rows()[0][0]);
    check(r);
    return r;
  }
  if (kind_ == Kind::finset) {
    std::vector<Value> acc;
    for (const auto& x : m.rows()[0]) {
      MValue r = k(x);
      check(r);
      acc = set_union(acc, r.rows()[0]);
    }
    return MValue(kind_, {std::move(acc)});
  }
  // Each continuation result is a whole state table, consulted at the
  // successor state of the pair that produced it.
  std::map<Value, MValue> cache;
  std::vector<std::vector<Value>> rows(states_.size());
  for (std::size_t s = 0; s < m.rows().size(); ++s) {
    for (const auto& p : m.rows()[s]) {
      auto it = cache.find(p.first());
      if (it == cache.end()) {
        MValue r = k(p.first());
        check(r);
        it = cache.emplace(p.first(), std::move(r)).first;
      }
      rows[s] = set_union(rows[s], it->second.rows()[states_.index_of(p.second())]);
    }
  }
  return MValue(kind_, std::move(rows));
}

MValue BaseMonad::map(const MValue& m, const PureFn& h) const {
  check(m);
  std::vector<std::vector<Value>> rows;
  rows.reserve(m.rows().size());
  for (const auto& row : m.rows()) {
    std::vector<Value> out;
    out.reserve(row.size());
    for (const auto& x : row) {
      out.push_back(kind_ == Kind::nondet ? Value::pair(h(x.first()), x.second()) : h(x));
    }
    rows.push_back(std::move(out));
  }
  return MValue(kind_, std::move(rows));
}

MValue BaseMonad::strength(const Value& c, const MValue& m) const {
  return map(m, [&c](const Value& x) { return Value::pair(c, x); });
}

MValue BaseMonad::bottom() const {
  return MValue(kind_, std::vector<std::vector<Value>>(kind_ == Kind::nondet ? states_.size() : 1));
}

MValue BaseMonad::join(const MValue& a, const MValue& b) const {
  check(a);
  check(b);
  if (kind_ == Kind::maybe) {
    if (a.is_bottom()) return b;
    if (b.is_bottom() || a == b) return a;
    throw Error("join of incomparable Maybe values");
  }
  std::vector<std::vector<Value>> rows;
  for (std::size_t i = 0; i < a.rows().size(); ++i) rows.push_back(set_union(a.rows()[i], b.rows()[i]));
  return MValue(kind_, std::move(rows));
}

bool BaseMonad::leq(const MValue& a, const MValue& b) const {
  check(a);
  check(b);
  if (kind_ == Kind::maybe) return a.is_bottom() || a == b;
  for (std::size_t i = 0; i < a.rows().size(); ++i) {
    if (!subset(a.rows()[i], b.rows()[i])) return false;
  }
  return true;
}

Kleisli<MValue> BaseMonad::iterate(const Kleisli<MValue>& f) const { return kleene_iterate(*this, f); }

MValue BaseMonad::choice(const std::vector<Value>& xs) const {
  if (kind_ == Kind::maybe && xs.size() > 1) throw ConfigError("Maybe cannot hold a proper choice");
  if (kind_ != Kind::nondet) return MValue(kind_, {xs});
  std::vector<std::vector<Value>> rows;
  for (const auto& s : states_.elements()) {
    std::vector<Value> row;
    for (const auto& x : xs) row.push_back(Value::pair(x, s));
    rows.push_back(std::move(row));
  }
  return MValue(kind_, std::move(rows));
}

std::vector<Value> BaseMonad::support(const MValue& m) const {
  check(m);
  std::set<Value> out;
  for (const auto& row : m.rows()) {
    for (const auto& x : row) out.insert(kind_ == Kind::nondet ? x.first() : x);
  }
  return {out.begin(), out.end()};
}

std::string BaseMonad::render(const MValue& m) const {
  return render(m, [](const Value& v) { return v.to_string(); });
}

std::string BaseMonad::render(const MValue& m, const ElementRenderer& element) const {
  check(m);
  auto set_text = [&](const std::vector<Value>& row, bool with_state) {
    std::string out = "{";
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ' ';
      if (with_state) {
        out += element(row[i].first()) + "@" + row[i].second().to_string();
      } else {
        out += element(row[i]);
      }
    }
    return out + "}";
  };
  switch (kind_) {
    case Kind::maybe:
      return m.rows()[0].empty() ? "nothing" : "(just " + element(m.rows()[0][0]) + ")";
    case Kind::finset:
      return set_text(m.rows()[0], false);
    case Kind::nondet: {
      std::string out = "[";
      for (std::size_t s = 0; s < m.rows().size(); ++s) {
        if (s) out += "; ";
        out += states_.elements()[s].to_string() + ": " + set_text(m.rows()[s], true);
      }
      return out + "]";
    }
  }
  return {};
}

Kleisli<MValue> kleene_iterate(const BaseMonad& m, const Kleisli<MValue>& f) {
  if (f.cod().shape() != Carrier::Shape::sum) {
    throw CarrierMismatch("iteration expects a sum codomain, got " + f.cod().name());
  }
  require_same_carrier(f.dom(), f.cod().right(), "iterate");

  // The chain is computed on first use: f may only become evaluable once
  // the surrounding construction is complete.
  struct Table {
    std::once_flag once;
    std::map<Value, MValue> values;
  };
  auto table = std::make_shared<Table>();
  auto solve = [m, f, table] {
    std::map<Value, MValue> step;
    for (const auto& x : f.dom().elements()) step.emplace(x, f(x));
    std::map<Value, MValue> h;
    for (const auto& x : f.dom().elements()) h.emplace(x, m.bottom());
    for (;;) {
      std::map<Value, MValue> next;
      for (const auto& [x, fx] : step) {
        next.emplace(x, m.bind(fx, [&](const Value& e) {
          return e.is_inl() ? m.eta(e.payload()) : h.at(e.payload());
        }));
      }
      if (next == h) break;
      h = std::move(next);
    }
    table->values = std::move(h);
  };
  return Kleisli<MValue>(f.dom(), f.cod().left(), [table, solve](const Value& x) {
    std::call_once(table->once, solve);
    return table->values.at(x);
  });
}

Kleisli<MValue> partition_iterate_maybe(const BaseMonad& m, const Kleisli<MValue>& f) {
  if (m.kind() != MValue::Kind::maybe) {
    throw ConfigError("partition iteration is defined for Maybe only, not " + m.name());
  }
  if (f.cod().shape() != Carrier::Shape::sum) {
    throw CarrierMismatch("iteration expects a sum codomain, got " + f.cod().name());
  }
  require_same_carrier(f.dom(), f.cod().right(), "partition_iterate_maybe");

  // result[x] is the Y reached from x once x has been placed in some X_i.
  std::map<Value, Value> result;
  std::vector<Value> layer;
  for (const auto& x : f.dom().elements()) {
    const MValue fx = f(x);
    const auto& row = fx.rows()[0];
    if (!row.empty() && row[0].is_inl()) {
      result.emplace(x, row[0].payload());
      layer.push_back(x);
    }
  }
  while (!layer.empty()) {
    std::set<Value> previous(layer.begin(), layer.end());
    layer.clear();
    for (const auto& x : f.dom().elements()) {
      if (result.count(x)) continue;
      const MValue fx = f(x);
      const auto& row = fx.rows()[0];
      if (!row.empty() && row[0].is_inr() && previous.count(row[0].payload())) {
        result.emplace(x, result.at(row[0].payload()));
        layer.push_back(x);
      }
    }
  }
  return Kleisli<MValue>(f.dom(), f.cod().left(), [m, result](const Value& x) {
    auto it = result.find(x);
    return it == result.end() ? m.bottom() : m.eta(it->second);
  });
}

BaseMonad make_instance(std::string_view kind, const std::optional<Carrier>& states) {
  if (kind == "maybe") return BaseMonad::maybe();
  if (kind == "finset") return BaseMonad::finset();
  if (kind == "nondetstate") {
    if (!states) throw ConfigError("nondetstate needs a state carrier");
    return BaseMonad::nondet_state(*states);
  }
  throw ConfigError("unknown base monad '" + std::string(kind) + "'");
}

}  // namespace elgot
