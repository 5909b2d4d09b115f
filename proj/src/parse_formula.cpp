#include "pomc/parse_formula.hpp"

#include <cctype>
#include <set>

#include "pomc/error.hpp"

namespace pomc {
namespace {

struct Tok {
  enum class Kind { ident, nat, sym, end };
  Kind kind;
  std::string text;
  std::size_t pos; // 1-based character position
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Runs of path-quantifier/temporal letters written together ("AG", "EF") mean
// the individual operators; any other identifier is a name.
bool splits_to_ops(const std::string& s) {
  if (s.size() < 2) return false;
  for (char c : s)
    if (c != 'A' && c != 'E' && c != 'X' && c != 'F' && c != 'G') return false;
  return true;
}

std::vector<Tok> lex(const std::string& text) {
  std::vector<Tok> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::parse_error, "position " + std::to_string(i + 1) + ": " + msg);
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t pos = i + 1;
    if (ident_start(c)) {
      std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) ++i;
      std::string word = text.substr(start, i - start);
      if (splits_to_ops(word)) {
        for (std::size_t k = 0; k < word.size(); ++k)
          out.push_back({Tok::Kind::ident, std::string(1, word[k]), pos + k});
      } else {
        out.push_back({Tok::Kind::ident, word, pos});
      }
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Tok::Kind::nat, text.substr(start, i - start), pos});
      continue;
    }
    auto two = text.substr(i, 2);
    if (two == "->" || two == "<=" || two == ">=" || two == "==" || two == "&&" || two == "||") {
      out.push_back({Tok::Kind::sym, two == "&&" ? "&" : two == "||" ? "|" : two, pos});
      i += 2;
      continue;
    }
    if (std::string("()[]{}@.,+-*/^!&|<=>").find(c) != std::string::npos) {
      out.push_back({Tok::Kind::sym, std::string(1, c), pos});
      ++i;
      continue;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::Kind::end, "", text.size() + 1});
  return out;
}

[[noreturn]] void fail_tok(const Tok& t, const std::string& msg) {
  throw Error(ErrorCode::parse_error, "position " + std::to_string(t.pos) + ": " + msg +
                                          (t.kind == Tok::Kind::end
                                               ? " (at end of input)"
                                               : ", found '" + t.text + "'"));
}

class TokenCursor {
public:
  explicit TokenCursor(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  const Tok& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Tok& next() {
    const Tok& t = peek();
    if (t.kind != Tok::Kind::end) ++pos_;
    return t;
  }
  bool at(const std::string& text) const { return peek().text == text && peek().kind != Tok::Kind::end; }
  bool accept(const std::string& text) {
    if (!at(text)) return false;
    next();
    return true;
  }
  void expect(const std::string& text) {
    if (!accept(text)) fail_tok(peek(), "expected '" + text + "'");
  }
  std::size_t mark() const { return pos_; }
  void rewind(std::size_t m) { pos_ = m; }
  bool done() const { return peek().kind == Tok::Kind::end; }

private:
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

unsigned long parse_nat(TokenCursor& cur, const char* what) {
  const Tok& t = cur.peek();
  if (t.kind != Tok::Kind::nat) fail_tok(t, std::string("expected ") + what);
  cur.next();
  try {
    return std::stoul(t.text);
  } catch (...) {
    fail_tok(t, "number out of range");
  }
}

Rational parse_rational_const(TokenCursor& cur) {
  const Tok& t = cur.peek();
  if (t.kind != Tok::Kind::nat) fail_tok(t, "expected number");
  cur.next();
  std::string text = t.text;
  if (cur.accept("/")) {
    const Tok& d = cur.peek();
    if (d.kind != Tok::Kind::nat) fail_tok(d, "expected denominator");
    cur.next();
    text += "/" + d.text;
  }
  return Rational::from_string(text);
}

std::string parse_agent_name(TokenCursor& cur) {
  std::string name;
  if (cur.accept("@")) name = "@";
  const Tok& t = cur.peek();
  if (t.kind != Tok::Kind::ident) fail_tok(t, "expected agent name");
  cur.next();
  return name + t.text;
}

std::optional<Rel> peek_rel(TokenCursor& cur) {
  const std::string& s = cur.peek().text;
  if (cur.peek().kind != Tok::Kind::sym) return std::nullopt;
  if (s == "<") return Rel::lt;
  if (s == "<=") return Rel::le;
  if (s == "=" || s == "==") return Rel::eq;
  if (s == ">=") return Rel::ge;
  if (s == ">") return Rel::gt;
  return std::nullopt;
}

bool is_reserved_word(const std::string& s) {
  static const std::set<std::string> words = {"true",    "false",  "and", "or",     "not",
                                              "implies", "exists", "forall", "forallset",
                                              "U",       "K",      "P",   "Pr",     "Prior",
                                              "A",       "E",      "X",   "F",      "G"};
  return words.count(s) > 0;
}

// ---------------------------------------------------------------------------
// Shared polynomial-comparison builder. Terms are deduplicated structurally;
// the constant part of lhs-rhs moves to the comparison's right side.

template <typename Term>
struct CompareBuilder {
  std::vector<Term> terms;

  std::size_t term_var(const Term& t) {
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (equal(terms[i], t)) return i;
    terms.push_back(t);
    return terms.size() - 1;
  }
};

// ---------------------------------------------------------------------------
// Branching-logic parser.

class CtlkpParser {
public:
  explicit CtlkpParser(const std::string& text) : cur_(lex(text)) {}

  FormulaKPtr run() {
    FormulaKPtr f = formula();
    if (!cur_.done()) fail_tok(cur_.peek(), "trailing input");
    return f;
  }

private:
  TokenCursor cur_;

  FormulaKPtr formula() {
    FormulaKPtr lhs = or_level();
    if (cur_.accept("->") || cur_.accept("implies")) return k_implies(lhs, formula());
    return lhs;
  }

  FormulaKPtr or_level() {
    FormulaKPtr f = and_level();
    while (cur_.at("|") || cur_.at("or")) {
      cur_.next();
      f = k_or(f, and_level());
    }
    return f;
  }

  FormulaKPtr and_level() {
    FormulaKPtr f = until_level();
    while (cur_.at("&") || cur_.at("and")) {
      cur_.next();
      f = k_and(f, until_level());
    }
    return f;
  }

  FormulaKPtr until_level() {
    FormulaKPtr f = unary();
    if (cur_.accept("U")) {
      if (cur_.accept("<=")) {
        unsigned long b = parse_nat(cur_, "until bound");
        return k_bounded_until(f, until_level(), b);
      }
      return k_until(f, until_level());
    }
    return f;
  }

  FormulaKPtr unary() {
    if (cur_.accept("!") || cur_.accept("not")) return k_not(unary());
    if (cur_.accept("A")) return k_all(unary());
    if (cur_.accept("E")) return k_exists(unary());
    if (cur_.accept("X")) return k_next(unary());
    if (cur_.at("F") || cur_.at("G")) {
      bool eventually = cur_.next().text == "F";
      std::optional<unsigned long> bound;
      if (cur_.accept("<=")) bound = parse_nat(cur_, "bound");
      FormulaKPtr a = unary();
      if (eventually) return bound ? k_eventually_bounded(a, *bound) : k_eventually(a);
      return bound ? k_globally_bounded(a, *bound) : k_globally(a);
    }
    if (cur_.accept("K")) {
      cur_.expect("[");
      std::string agent = parse_agent_name(cur_);
      cur_.expect("]");
      return k_know(std::move(agent), unary());
    }
    return atom();
  }

  FormulaKPtr atom() {
    const Tok& t = cur_.peek();
    if (cur_.accept("true")) return k_true();
    if (cur_.accept("false")) return k_false();
    if (t.text == "Pr" || t.text == "Prior" || t.kind == Tok::Kind::nat || t.text == "-")
      return comparison();
    if (t.text == "(") {
      // A parenthesis opens either a formula or an arithmetic group; try the
      // formula reading first and fall back on the comparison reading.
      std::size_t m = cur_.mark();
      try {
        cur_.expect("(");
        FormulaKPtr inner = formula();
        cur_.expect(")");
        if (peek_rel(cur_) || cur_.at("+") || cur_.at("-") || cur_.at("*") || cur_.at("^"))
          throw Error(ErrorCode::parse_error, "arithmetic context");
        return inner;
      } catch (const Error&) {
        cur_.rewind(m);
        return comparison();
      }
    }
    if (t.text == "@") { // reserved-prefix propositions like @state_s
      cur_.next();
      const Tok& name = cur_.peek();
      if (name.kind != Tok::Kind::ident) fail_tok(name, "expected a proposition name");
      cur_.next();
      return k_prop("@" + name.text);
    }
    if (t.kind == Tok::Kind::ident) {
      if (is_reserved_word(t.text)) fail_tok(t, "expected a formula");
      cur_.next();
      return k_prop(t.text);
    }
    fail_tok(t, "expected a formula");
  }

  // comparison := arith rel arith, at least one probability term overall.
  FormulaKPtr comparison() {
    CompareBuilder<ProbTermK> builder;
    Polynomial lhs = arith(builder);
    auto rel = peek_rel(cur_);
    if (!rel) fail_tok(cur_.peek(), "expected a comparison operator");
    cur_.next();
    Polynomial rhs = arith(builder);
    if (builder.terms.empty())
      fail_tok(cur_.peek(), "comparison mentions no probability terms");
    Polynomial diff = lhs - rhs;
    Rational constant = diff.constant_term();
    return k_compare(std::move(builder.terms), diff.without_constant(), *rel, -constant);
  }

  Polynomial arith(CompareBuilder<ProbTermK>& builder) {
    Polynomial p = term(builder);
    for (;;) {
      if (cur_.accept("+")) {
        p = p + term(builder);
      } else if (cur_.accept("-")) {
        p = p - term(builder);
      } else {
        return p;
      }
    }
  }

  Polynomial term(CompareBuilder<ProbTermK>& builder) {
    Polynomial p = factor(builder);
    while (cur_.accept("*")) p = p * factor(builder);
    return p;
  }

  Polynomial factor(CompareBuilder<ProbTermK>& builder) {
    Polynomial p = base(builder);
    if (cur_.accept("^")) p = p.pow(static_cast<unsigned>(parse_nat(cur_, "exponent")));
    return p;
  }

  Polynomial base(CompareBuilder<ProbTermK>& builder) {
    const Tok& t = cur_.peek();
    if (t.kind == Tok::Kind::nat) return Polynomial::constant(parse_rational_const(cur_));
    if (cur_.accept("-")) return -factor(builder);
    if (cur_.accept("(")) {
      Polynomial p = arith(builder);
      cur_.expect(")");
      return p;
    }
    if (t.text == "Pr" || t.text == "Prior") {
      ProbKind kind = t.text == "Pr" ? ProbKind::current : ProbKind::prior;
      cur_.next();
      cur_.expect("[");
      std::string agent = parse_agent_name(cur_);
      cur_.expect("]");
      cur_.expect("(");
      FormulaKPtr body = formula();
      cur_.expect(")");
      return Polynomial::variable(builder.term_var({kind, std::move(agent), std::move(body)}));
    }
    fail_tok(t, "expected a probability term or number");
  }
};

// ---------------------------------------------------------------------------
// First-order parser.

class WmloParser {
public:
  WmloParser(const std::string& text, const WmloParseOptions& opts)
      : cur_(lex(text)), opts_(opts) {}

  FormulaWPtr run() {
    FormulaWPtr f = formula(false);
    if (!cur_.done()) fail_tok(cur_.peek(), "trailing input");
    if (!opts_.allow_free_time) {
      auto free = free_time_variables(f);
      if (!free.empty())
        throw Error(ErrorCode::unbound_variable, "free time variable '" + *free.begin() + "'");
    }
    return f;
  }

private:
  TokenCursor cur_;
  WmloParseOptions opts_;
  std::set<std::string> time_vars_;
  std::set<std::string> set_vars_;

  bool known_time_var(const std::string& v) const {
    return time_vars_.count(v) > 0 || opts_.allow_free_time;
  }

  FormulaWPtr formula(bool stop_pipe) {
    if (cur_.at("exists") || cur_.at("forall")) {
      bool exists = cur_.next().text == "exists";
      std::vector<std::string> vars;
      while (cur_.peek().kind == Tok::Kind::ident && !cur_.at(".")) {
        const Tok& v = cur_.peek();
        if (is_reserved_word(v.text)) fail_tok(v, "expected a variable name");
        cur_.next();
        vars.push_back(v.text);
      }
      if (vars.empty()) fail_tok(cur_.peek(), "expected a variable name");
      cur_.expect(".");
      std::vector<std::string> fresh;
      for (const auto& v : vars)
        if (time_vars_.insert(v).second) fresh.push_back(v);
      FormulaWPtr body = formula(stop_pipe);
      for (const auto& v : fresh) time_vars_.erase(v);
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = exists ? w_exists(*it, body) : w_forall(*it, body);
      return body;
    }
    if (cur_.accept("forallset")) {
      const Tok& v = cur_.peek();
      if (v.kind != Tok::Kind::ident || is_reserved_word(v.text))
        fail_tok(v, "expected a set variable name");
      cur_.next();
      cur_.expect(".");
      bool fresh = set_vars_.insert(v.text).second;
      FormulaWPtr body = formula(stop_pipe);
      if (fresh) set_vars_.erase(v.text);
      return w_forall_set(v.text, body);
    }
    FormulaWPtr lhs = or_level(stop_pipe);
    if (cur_.accept("->") || cur_.accept("implies")) return w_implies(lhs, formula(stop_pipe));
    return lhs;
  }

  FormulaWPtr or_level(bool stop_pipe) {
    FormulaWPtr f = and_level(stop_pipe);
    for (;;) {
      if (cur_.at("|")) {
        if (stop_pipe) return f;
        cur_.next();
        f = w_or(f, and_level(stop_pipe));
      } else if (cur_.accept("or")) {
        f = w_or(f, and_level(stop_pipe));
      } else {
        return f;
      }
    }
  }

  FormulaWPtr and_level(bool stop_pipe) {
    FormulaWPtr f = unary(stop_pipe);
    while (cur_.at("&") || cur_.at("and")) {
      cur_.next();
      f = w_and(f, unary(stop_pipe));
    }
    return f;
  }

  FormulaWPtr unary(bool stop_pipe) {
    if (cur_.accept("!") || cur_.accept("not")) return w_not(unary(stop_pipe));
    if (cur_.accept("K")) {
      cur_.expect("[");
      std::string agent = parse_agent_name(cur_);
      cur_.expect("]");
      cur_.expect("@");
      TimeTerm at = time_term();
      return w_know_at(std::move(agent), at, unary(stop_pipe));
    }
    return atom(stop_pipe);
  }

  TimeTerm time_term() {
    const Tok& t = cur_.peek();
    if (t.kind == Tok::Kind::nat) return TimeTerm::constant(parse_nat(cur_, "time"));
    if (t.kind == Tok::Kind::ident && !is_reserved_word(t.text)) {
      if (!known_time_var(t.text)) fail_tok(t, "unbound time variable '" + t.text + "'");
      cur_.next();
      return TimeTerm::variable(t.text);
    }
    fail_tok(t, "expected a time variable or constant");
  }

  // A time term usable for the timecomp backtrack probe: idents must be bound
  // time variables and must not start a probability term or proposition atom.
  std::optional<TimeTerm> try_time_term() {
    const Tok& t = cur_.peek();
    if (t.kind == Tok::Kind::nat) {
      if (cur_.peek(1).text == "/") return std::nullopt;
      cur_.next();
      return TimeTerm::constant(std::stoul(t.text));
    }
    if (t.kind == Tok::Kind::ident && !is_reserved_word(t.text) && known_time_var(t.text)) {
      const std::string& follow = cur_.peek(1).text;
      if (follow == "(" || follow == "[" || follow == "@") return std::nullopt;
      cur_.next();
      return TimeTerm::variable(t.text);
    }
    return std::nullopt;
  }

  FormulaWPtr atom(bool stop_pipe) {
    const Tok& t = cur_.peek();
    if (cur_.accept("true")) return w_true();
    if (cur_.accept("false")) return w_false();

    // Order comparisons between time terms: t < u, t = u, t <= u.
    {
      std::size_t m = cur_.mark();
      if (auto a = try_time_term()) {
        auto rel = peek_rel(cur_);
        if (rel && (*rel == Rel::lt || *rel == Rel::eq || *rel == Rel::le)) {
          cur_.next();
          std::size_t m2 = cur_.mark();
          if (auto b = try_time_term()) {
            bool terminated = cur_.done() || cur_.peek().kind == Tok::Kind::sym ||
                              cur_.at("or") || cur_.at("and") || cur_.at("implies");
            if (terminated && !cur_.at("(") && !cur_.at("[") && !cur_.at("@")) {
              switch (*rel) {
                case Rel::lt: return w_less(*a, *b);
                case Rel::eq: return w_time_eq(*a, *b);
                default: return w_time_le(*a, *b);
              }
            }
            cur_.rewind(m2);
          }
        }
        cur_.rewind(m);
      }
    }

    if (t.text == "P" || t.text == "Pr" || t.kind == Tok::Kind::nat || t.text == "-")
      return comparison(stop_pipe);

    if (t.text == "(") {
      std::size_t m = cur_.mark();
      try {
        cur_.expect("(");
        FormulaWPtr inner = formula(false);
        cur_.expect(")");
        if (peek_rel(cur_) || cur_.at("+") || cur_.at("-") || cur_.at("*") || cur_.at("^"))
          throw Error(ErrorCode::parse_error, "arithmetic context");
        return inner;
      } catch (const Error&) {
        cur_.rewind(m);
        return comparison(stop_pipe);
      }
    }

    if (t.text == "@") { // reserved-prefix propositions like @state_s
      cur_.next();
      const Tok& name = cur_.peek();
      if (name.kind != Tok::Kind::ident) fail_tok(name, "expected a proposition name");
      cur_.next();
      cur_.expect("@");
      return w_prop_at("@" + name.text, time_term());
    }
    if (t.kind == Tok::Kind::ident) {
      if (is_reserved_word(t.text)) fail_tok(t, "expected a formula");
      cur_.next();
      cur_.expect("@");
      TimeTerm at = time_term();
      if (set_vars_.count(t.text)) return w_set_at(t.text, at);
      return w_prop_at(t.text, at);
    }
    fail_tok(t, "expected a formula");
  }

  FormulaWPtr comparison(bool stop_pipe) {
    (void)stop_pipe;
    CompareBuilder<ProbTermW> builder;
    Polynomial lhs = arith(builder);
    auto rel = peek_rel(cur_);
    if (!rel) fail_tok(cur_.peek(), "expected a comparison operator");
    cur_.next();
    Polynomial rhs = arith(builder);
    if (builder.terms.empty())
      fail_tok(cur_.peek(), "comparison mentions no probability terms");
    Polynomial diff = lhs - rhs;
    Rational constant = diff.constant_term();
    return w_compare(std::move(builder.terms), diff.without_constant(), *rel, -constant);
  }

  Polynomial arith(CompareBuilder<ProbTermW>& builder) {
    Polynomial p = term(builder);
    for (;;) {
      if (cur_.accept("+")) {
        p = p + term(builder);
      } else if (cur_.accept("-")) {
        p = p - term(builder);
      } else {
        return p;
      }
    }
  }

  Polynomial term(CompareBuilder<ProbTermW>& builder) {
    Polynomial p = factor(builder);
    while (cur_.accept("*")) p = p * factor(builder);
    return p;
  }

  Polynomial factor(CompareBuilder<ProbTermW>& builder) {
    Polynomial p = base(builder);
    if (cur_.accept("^")) p = p.pow(static_cast<unsigned>(parse_nat(cur_, "exponent")));
    return p;
  }

  Polynomial base(CompareBuilder<ProbTermW>& builder) {
    const Tok& t = cur_.peek();
    if (t.kind == Tok::Kind::nat) return Polynomial::constant(parse_rational_const(cur_));
    if (cur_.accept("-")) return -factor(builder);
    if (cur_.accept("(")) {
      Polynomial p = arith(builder);
      cur_.expect(")");
      return p;
    }
    if (t.text == "P") {
      cur_.next();
      cur_.expect("(");
      FormulaWPtr body = formula(true);
      FormulaWPtr given;
      if (cur_.accept("|")) given = formula(true);
      cur_.expect(")");
      ProbTermW term = given ? cond_prob(std::move(body), std::move(given))
                             : global_prob(std::move(body));
      return Polynomial::variable(builder.term_var(term));
    }
    if (t.text == "Pr") {
      cur_.next();
      cur_.expect("[");
      std::string agent = parse_agent_name(cur_);
      cur_.expect("]");
      cur_.expect("@");
      TimeTerm at = time_term();
      cur_.expect("(");
      FormulaWPtr body = formula(false);
      cur_.expect(")");
      return Polynomial::variable(
          builder.term_var(agent_prob_at(std::move(agent), at, std::move(body))));
    }
    fail_tok(t, "expected a probability term or number");
  }
};

} // namespace

FormulaKPtr parse_ctlkp(const std::string& text) { return CtlkpParser(text).run(); }

FormulaWPtr parse_wmlo(const std::string& text, const WmloParseOptions& opts) {
  return WmloParser(text, opts).run();
}

MixedTimeFormula parse_mixed_time(const std::string& text) {
  FormulaWPtr f = parse_wmlo(text);
  auto mixed = to_mixed_time(f);
  if (!mixed)
    throw Error(ErrorCode::invalid_argument,
                "formula is not an existential polynomial question over marginals: " + text);
  return *mixed;
}

} // namespace pomc
