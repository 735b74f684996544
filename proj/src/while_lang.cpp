#include "elgot/while_lang.hpp"

#include <cctype>
#include <set>
#include <vector>

namespace elgot {

// ---------------------------------------------------------------------------
// Syntax
// ---------------------------------------------------------------------------

StmtPtr Stmt::skip() { return std::make_shared<const Stmt>(); }

StmtPtr Stmt::act(std::string name) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::act;
  s->name = std::move(name);
  return s;
}

StmtPtr Stmt::seq(StmtPtr p, StmtPtr q) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::seq;
  s->first = std::move(p);
  s->second = std::move(q);
  return s;
}

StmtPtr Stmt::branch(std::string pred, StmtPtr then_branch, StmtPtr else_branch) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::branch;
  s->name = std::move(pred);
  s->first = std::move(then_branch);
  s->second = std::move(else_branch);
  return s;
}

StmtPtr Stmt::loop(std::string pred, StmtPtr body) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::loop;
  s->name = std::move(pred);
  s->first = std::move(body);
  return s;
}

std::string Stmt::to_string() const {
  switch (kind) {
    case Kind::skip:
      return "skip";
    case Kind::act:
      return name;
    case Kind::seq:
      return "(seq " + first->to_string() + " " + second->to_string() + ")";
    case Kind::branch:
      return "(if " + name + " " + first->to_string() + " " + second->to_string() + ")";
    case Kind::loop:
      return "(while " + name + " " + first->to_string() + ")";
  }
  return "?";
}

namespace {

const std::set<std::string, std::less<>> keywords = {"skip", "if", "then", "else", "while", "do"};

struct Token {
  enum class Kind { word, symbol, end };
  Kind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
    } else if (c == ';' || c == '{' || c == '}') {
      out.push_back({Token::Kind::symbol, std::string(1, c), line, col});
      advance();
    } else if (c >= 'a' && c <= 'z') {
      Token t{Token::Kind::word, "", line, col};
      while (i < src.size() && (std::islower(static_cast<unsigned char>(src[i])) ||
                                std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        t.text += src[i];
        advance();
      }
      out.push_back(std::move(t));
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }
  }
  out.push_back({Token::Kind::end, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  StmtPtr program() {
    StmtPtr s = sequence();
    if (cur().kind != Token::Kind::end) fail("expected ';' or end of input");
    return s;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = cur();
    std::string found = t.kind == Token::Kind::end ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(what + ", found " + found, t.line, t.column);
  }

  bool at(std::string_view text) const { return cur().kind != Token::Kind::end && cur().text == text; }

  void expect(std::string_view text) {
    if (!at(text)) fail("expected '" + std::string(text) + "'");
    ++pos_;
  }

  std::string ident(const char* role) {
    if (cur().kind != Token::Kind::word || keywords.count(cur().text)) fail(std::string("expected ") + role);
    return toks_[pos_++].text;
  }

  StmtPtr sequence() {
    StmtPtr s = simple();
    if (at(";")) {
      ++pos_;
      return Stmt::seq(s, sequence());
    }
    return s;
  }

  StmtPtr simple() {
    const Token& t = cur();
    StmtPtr s;
    if (at("skip")) {
      ++pos_;
      s = Stmt::skip();
    } else if (at("if")) {
      ++pos_;
      std::string pred = ident("a predicate");
      expect("then");
      StmtPtr p = simple();
      expect("else");
      s = Stmt::branch(pred, p, simple());
    } else if (at("while")) {
      ++pos_;
      std::string pred = ident("a predicate");
      expect("do");
      s = Stmt::loop(pred, simple());
    } else if (at("{")) {
      ++pos_;
      s = sequence();
      expect("}");
    } else if (t.kind == Token::Kind::word && !keywords.count(t.text)) {
      s = Stmt::act(toks_[pos_++].text);
    } else {
      fail("expected a statement");
    }
    auto located = std::make_shared<Stmt>(*s);
    located->line = t.line;
    located->column = t.column;
    return located;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

StmtPtr parse_program(std::string_view source) { return Parser(tokenize(source)).program(); }

// ---------------------------------------------------------------------------
// Environment
// ---------------------------------------------------------------------------

namespace {

Carrier truth_carrier() {
  static const Carrier t = Carrier::sum(Carrier::unit(), Carrier::unit());
  return t;
}

Signature io_signature(const Carrier& n) {
  return Signature({{"write", n, Carrier::unit()}, {"read", Carrier::unit(), n}});
}

}  // namespace

Env::Env(Resumption r, Carrier values) : r_(std::move(r)), values_(std::move(values)), truth_(truth_carrier()) {}

Env Env::standard(const BaseMonad& base, std::size_t alphabet, std::size_t depth) {
  if (alphabet == 0) throw ConfigError("the value alphabet must not be empty");
  Carrier n = Carrier::numbered("n", "", alphabet);
  Env env(Resumption(base, io_signature(n), depth), n);
  const Resumption& r = env.r_;

  env.add_action("write", Kleisli<Tree>(n, n, [r](const Value& c) {
                   return r.iota(Value::op("write", c, {{unit_value(), c}}));
                 }));
  env.add_action("read", Kleisli<Tree>(n, n, [r, n](const Value&) {
                   Value::Children ch;
                   for (const auto& v : n.elements()) ch.emplace_back(v, v);
                   return r.iota(Value::op("read", unit_value(), std::move(ch)));
                 }));

  const Value no = Value::inl(unit_value());
  const Value yes = Value::inr(unit_value());
  env.add_predicate("true", Kleisli<Tree>(n, env.truth_, [r, yes](const Value&) { return r.eta(yes); }));
  env.add_predicate("false", Kleisli<Tree>(n, env.truth_, [r, no](const Value&) { return r.eta(no); }));
  if (base.kind() != MValue::Kind::maybe) {
    env.add_predicate("coin", Kleisli<Tree>(n, env.truth_, [r, no, yes](const Value&) {
                        return r.ext(r.base().choice({no, yes}));
                      }));
  }
  return env;
}

void Env::add_action(const std::string& name, Kleisli<Tree> f) {
  require_same_carrier(values_, f.dom(), "action " + name);
  require_same_carrier(values_, f.cod(), "action " + name);
  actions_.insert_or_assign(name, std::move(f));
}

void Env::add_predicate(const std::string& name, Kleisli<Tree> f) {
  require_same_carrier(values_, f.dom(), "predicate " + name);
  require_same_carrier(truth_, f.cod(), "predicate " + name);
  predicates_.insert_or_assign(name, std::move(f));
}

const Kleisli<Tree>& Env::action(const std::string& name) const {
  auto it = actions_.find(name);
  if (it == actions_.end()) throw SemanticError("unknown action '" + name + "'");
  return it->second;
}

const Kleisli<Tree>& Env::predicate(const std::string& name) const {
  auto it = predicates_.find(name);
  if (it != predicates_.end()) return it->second;
  if (name == "coin" && r_.base().kind() == MValue::Kind::maybe) {
    throw ConfigError("predicate 'coin' needs a nondeterministic base, not maybe");
  }
  throw SemanticError("unknown predicate '" + name + "'");
}

// ---------------------------------------------------------------------------
// Semantics
// ---------------------------------------------------------------------------

namespace {

std::string where(const Stmt& s) {
  return s.line ? " at " + std::to_string(s.line) + ":" + std::to_string(s.column) : "";
}

/// `M dist ∘ τ ∘ <id, b>`: the test result paired with the current value.
Tree test(const Resumption& r, const Kleisli<Tree>& b, const Value& x) {
  return r.map(r.strength(x, b(x)), distribute);
}

}  // namespace

Kleisli<Tree> interpret(const StmtPtr& s, const Env& env) {
  const Resumption& r = env.monad();
  const Carrier& n = env.values();
  try {
    switch (s->kind) {
      case Stmt::Kind::skip:
        return unit_fn(r, n);
      case Stmt::Kind::act:
        return env.action(s->name);
      case Stmt::Kind::seq: {
        Kleisli<Tree> p = interpret(s->first, env);
        return compose_kleisli(r, interpret(s->second, env), p);
      }
      case Stmt::Kind::branch: {
        // [⟦Q⟧ ∘ fst, ⟦P⟧ ∘ fst]* ∘ M dist ∘ τ ∘ <id, ⟦b⟧>
        Kleisli<Tree> b = env.predicate(s->name);
        Kleisli<Tree> p = interpret(s->first, env);
        Kleisli<Tree> q = interpret(s->second, env);
        return Kleisli<Tree>(n, n, [r, b, p, q](const Value& x) {
          return r.bind(test(r, b, x), [p, q](const Value& e) {
            return e.is_inl() ? q(e.payload().first()) : p(e.payload().first());
          });
        });
      }
      case Stmt::Kind::loop: {
        // ([M inl ∘ η ∘ fst, M inr ∘ ⟦P⟧ ∘ fst]* ∘ M dist ∘ τ ∘ <id, ⟦b⟧>)†
        Kleisli<Tree> b = env.predicate(s->name);
        Kleisli<Tree> p = interpret(s->first, env);
        Kleisli<Tree> step(n, Carrier::sum(n, n), [r, b, p](const Value& x) {
          return r.bind(test(r, b, x), [r, p](const Value& e) {
            const Value& v = e.payload().first();
            if (e.is_inl()) return r.eta(Value::inl(v));
            return r.map(p(v), [](const Value& y) { return Value::inr(y); });
          });
        });
        return iterate_res(r, step);
      }
    }
  } catch (const SemanticError& e) {
    std::string msg = e.what();
    if (msg.find(" at ") == std::string::npos) throw SemanticError(msg + where(*s));
    throw;
  }
  throw SemanticError("malformed statement");
}

std::string run(const StmtPtr& s, const Env& env, const Value& input, std::size_t depth) {
  if (!env.values().contains(input)) {
    throw ConfigError("input " + input.to_string() + " is not in the alphabet " + env.values().name());
  }
  return render_tree(env.monad(), interpret(s, env)(input), depth);
}

}  // namespace elgot
