#include "pomc/formula.hpp"

#include <sstream>

#include "pomc/error.hpp"
#include "pomc/verdict.hpp"

namespace pomc {

const char* rel_text(Rel r) {
  switch (r) {
    case Rel::lt: return "<";
    case Rel::le: return "<=";
    case Rel::eq: return "=";
    case Rel::ge: return ">=";
    case Rel::gt: return ">";
  }
  return "?";
}

bool rel_holds(const Rational& lhs, Rel r, const Rational& rhs) {
  switch (r) {
    case Rel::lt: return lhs < rhs;
    case Rel::le: return lhs <= rhs;
    case Rel::eq: return lhs == rhs;
    case Rel::ge: return lhs >= rhs;
    case Rel::gt: return lhs > rhs;
  }
  return false;
}

// --------------------------------------------------------------------------
// Factories.

namespace {
template <typename Node>
FormulaKPtr mk(Node&& n) {
  return std::make_shared<const FormulaK>(FormulaK{std::forward<Node>(n)});
}
template <typename Node>
FormulaWPtr wk(Node&& n) {
  return std::make_shared<const FormulaW>(FormulaW{std::forward<Node>(n)});
}

/// Canonical comparison shape shared by both logics: the constant part lives
/// on the right-hand side, structurally equal terms share one variable,
/// unmentioned terms are dropped, and the remaining terms are ordered by their
/// printed form so that printing and reparsing reproduce the same AST. A
/// comparison that cancels to a constant folds to its truth value.
template <typename Term>
struct CanonicalCompare {
  std::vector<Term> terms;
  Polynomial poly;
  Rational rhs;
  bool constant = false;
  bool truth = false;
};

template <typename Term>
CanonicalCompare<Term> canonicalize_compare(std::vector<Term> terms, const Polynomial& poly,
                                            Rel rel, const Rational& rhs) {
  CanonicalCompare<Term> out;
  out.rhs = rhs - poly.constant_term();
  Polynomial shifted = poly.without_constant();

  std::vector<Term> unique;
  std::vector<Polynomial> image;
  for (Term& t : terms) {
    std::size_t at = unique.size();
    for (std::size_t k = 0; k < unique.size(); ++k)
      if (equal(unique[k], t)) {
        at = k;
        break;
      }
    if (at == unique.size()) unique.push_back(std::move(t));
    image.push_back(Polynomial::variable(at));
  }
  while (image.size() < shifted.variable_count()) image.emplace_back();
  Polynomial merged = shifted.substitute(image);
  if (merged.is_constant()) {
    out.constant = true;
    out.truth = rel_holds(merged.constant_term(), rel, out.rhs);
    return out;
  }

  std::vector<std::size_t> used;
  for (std::size_t k = 0; k < unique.size(); ++k)
    if (merged.degree_in(k) > 0) used.push_back(k);
  std::sort(used.begin(), used.end(), [&](std::size_t a, std::size_t b) {
    return to_string(unique[a]) < to_string(unique[b]);
  });
  std::vector<Polynomial> renumber(unique.size());
  for (std::size_t k = 0; k < used.size(); ++k) {
    renumber[used[k]] = Polynomial::variable(k);
    out.terms.push_back(unique[used[k]]);
  }
  out.poly = merged.substitute(renumber);
  return out;
}
} // namespace

FormulaKPtr k_true() { return mk(FormulaK::True{}); }
FormulaKPtr k_false() { return k_not(k_true()); }
FormulaKPtr k_prop(std::string name) { return mk(FormulaK::Prop{std::move(name)}); }
FormulaKPtr k_not(FormulaKPtr a) { return mk(FormulaK::Not{std::move(a)}); }
FormulaKPtr k_and(FormulaKPtr a, FormulaKPtr b) {
  return mk(FormulaK::And{std::move(a), std::move(b)});
}
FormulaKPtr k_or(FormulaKPtr a, FormulaKPtr b) {
  return k_not(k_and(k_not(std::move(a)), k_not(std::move(b))));
}
FormulaKPtr k_implies(FormulaKPtr a, FormulaKPtr b) {
  return k_not(k_and(std::move(a), k_not(std::move(b))));
}
FormulaKPtr k_all(FormulaKPtr a) { return mk(FormulaK::AllRuns{std::move(a)}); }
FormulaKPtr k_exists(FormulaKPtr a) { return k_not(k_all(k_not(std::move(a)))); }
FormulaKPtr k_next(FormulaKPtr a) { return mk(FormulaK::Next{std::move(a)}); }
FormulaKPtr k_until(FormulaKPtr a, FormulaKPtr b) {
  return mk(FormulaK::Until{std::move(a), std::move(b)});
}
FormulaKPtr k_bounded_until(FormulaKPtr a, FormulaKPtr b, unsigned long bound) {
  return mk(FormulaK::BoundedUntil{std::move(a), std::move(b), bound});
}
FormulaKPtr k_eventually(FormulaKPtr a) { return k_until(k_true(), std::move(a)); }
FormulaKPtr k_eventually_bounded(FormulaKPtr a, unsigned long bound) {
  return k_bounded_until(k_true(), std::move(a), bound);
}
FormulaKPtr k_globally(FormulaKPtr a) { return k_not(k_eventually(k_not(std::move(a)))); }
FormulaKPtr k_globally_bounded(FormulaKPtr a, unsigned long bound) {
  return k_not(k_eventually_bounded(k_not(std::move(a)), bound));
}
FormulaKPtr k_know(std::string agent, FormulaKPtr a) {
  return mk(FormulaK::Know{std::move(agent), std::move(a)});
}
FormulaKPtr k_compare(std::vector<ProbTermK> terms, Polynomial poly, Rel rel, Rational rhs) {
  auto c = canonicalize_compare(std::move(terms), poly, rel, rhs);
  if (c.constant) return c.truth ? k_true() : k_false();
  return mk(FormulaK::Compare{std::move(c.terms), std::move(c.poly), rel, std::move(c.rhs)});
}

FormulaWPtr w_true() { return wk(FormulaW::True{}); }
FormulaWPtr w_false() { return w_not(w_true()); }
FormulaWPtr w_prop_at(std::string name, TimeTerm at) {
  return wk(FormulaW::PropAt{std::move(name), std::move(at)});
}
FormulaWPtr w_set_at(std::string set, TimeTerm at) {
  return wk(FormulaW::SetAt{std::move(set), std::move(at)});
}
FormulaWPtr w_less(TimeTerm a, TimeTerm b) {
  return wk(FormulaW::Less{std::move(a), std::move(b)});
}
FormulaWPtr w_time_eq(const TimeTerm& a, const TimeTerm& b) {
  return w_and(w_not(w_less(a, b)), w_not(w_less(b, a)));
}
FormulaWPtr w_time_le(const TimeTerm& a, const TimeTerm& b) { return w_not(w_less(b, a)); }
FormulaWPtr w_not(FormulaWPtr a) { return wk(FormulaW::Not{std::move(a)}); }
FormulaWPtr w_and(FormulaWPtr a, FormulaWPtr b) {
  return wk(FormulaW::And{std::move(a), std::move(b)});
}
FormulaWPtr w_or(FormulaWPtr a, FormulaWPtr b) {
  return w_not(w_and(w_not(std::move(a)), w_not(std::move(b))));
}
FormulaWPtr w_implies(FormulaWPtr a, FormulaWPtr b) {
  return w_not(w_and(std::move(a), w_not(std::move(b))));
}
FormulaWPtr w_know_at(std::string agent, TimeTerm at, FormulaWPtr a) {
  return wk(FormulaW::KnowAt{std::move(agent), std::move(at), std::move(a)});
}
FormulaWPtr w_forall(std::string var, FormulaWPtr a) {
  return wk(FormulaW::ForallT{std::move(var), std::move(a)});
}
FormulaWPtr w_exists(std::string var, FormulaWPtr a) {
  return wk(FormulaW::ExistsT{std::move(var), std::move(a)});
}
FormulaWPtr w_forall_set(std::string set, FormulaWPtr a) {
  return wk(FormulaW::ForallSet{std::move(set), std::move(a)});
}
FormulaWPtr w_compare(std::vector<ProbTermW> terms, Polynomial poly, Rel rel, Rational rhs) {
  auto c = canonicalize_compare(std::move(terms), poly, rel, rhs);
  if (c.constant) return c.truth ? w_true() : w_false();
  return wk(FormulaW::Compare{std::move(c.terms), std::move(c.poly), rel, std::move(c.rhs)});
}

ProbTermW global_prob(FormulaWPtr body) {
  return {ProbTermW::Kind::global, "", TimeTerm::constant(0), std::move(body), nullptr};
}
ProbTermW agent_prob_at(std::string agent, TimeTerm at, FormulaWPtr body) {
  return {ProbTermW::Kind::agent_at, std::move(agent), std::move(at), std::move(body), nullptr};
}
ProbTermW cond_prob(FormulaWPtr body, FormulaWPtr given) {
  return {ProbTermW::Kind::conditional, "", TimeTerm::constant(0), std::move(body),
          std::move(given)};
}

// --------------------------------------------------------------------------
// Structural equality.

bool equal(const ProbTermK& a, const ProbTermK& b) {
  return a.kind == b.kind && a.agent == b.agent && equal(a.body, b.body);
}

bool equal(const FormulaKPtr& a, const FormulaKPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  using F = FormulaK;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, F::True>) {
          return true;
        } else if constexpr (std::is_same_v<T, F::Prop>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, F::Not>) {
          return equal(x.a, y.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return equal(x.a, y.a) && equal(x.b, y.b);
        } else if constexpr (std::is_same_v<T, F::AllRuns>) {
          return equal(x.a, y.a);
        } else if constexpr (std::is_same_v<T, F::Next>) {
          return equal(x.a, y.a);
        } else if constexpr (std::is_same_v<T, F::Until>) {
          return equal(x.a, y.a) && equal(x.b, y.b);
        } else if constexpr (std::is_same_v<T, F::BoundedUntil>) {
          return x.bound == y.bound && equal(x.a, y.a) && equal(x.b, y.b);
        } else if constexpr (std::is_same_v<T, F::Know>) {
          return x.agent == y.agent && equal(x.a, y.a);
        } else {
          static_assert(std::is_same_v<T, F::Compare>);
          if (x.terms.size() != y.terms.size() || x.rel != y.rel || x.rhs != y.rhs ||
              !(x.poly == y.poly))
            return false;
          for (std::size_t i = 0; i < x.terms.size(); ++i)
            if (!equal(x.terms[i], y.terms[i])) return false;
          return true;
        }
      },
      a->node);
}

bool equal(const ProbTermW& a, const ProbTermW& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ProbTermW::Kind::global: return equal(a.body, b.body);
    case ProbTermW::Kind::agent_at:
      return a.agent == b.agent && a.at == b.at && equal(a.body, b.body);
    case ProbTermW::Kind::conditional: return equal(a.body, b.body) && equal(a.given, b.given);
  }
  return false;
}

bool equal(const FormulaWPtr& a, const FormulaWPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  using F = FormulaW;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, F::True>) {
          return true;
        } else if constexpr (std::is_same_v<T, F::PropAt>) {
          return x.name == y.name && x.at == y.at;
        } else if constexpr (std::is_same_v<T, F::SetAt>) {
          return x.set == y.set && x.at == y.at;
        } else if constexpr (std::is_same_v<T, F::Less>) {
          return x.a == y.a && x.b == y.b;
        } else if constexpr (std::is_same_v<T, F::Not>) {
          return equal(x.a, y.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return equal(x.a, y.a) && equal(x.b, y.b);
        } else if constexpr (std::is_same_v<T, F::KnowAt>) {
          return x.agent == y.agent && x.at == y.at && equal(x.a, y.a);
        } else if constexpr (std::is_same_v<T, F::ForallT>) {
          return x.var == y.var && equal(x.a, y.a);
        } else if constexpr (std::is_same_v<T, F::ExistsT>) {
          return x.var == y.var && equal(x.a, y.a);
        } else if constexpr (std::is_same_v<T, F::ForallSet>) {
          return x.set == y.set && equal(x.a, y.a);
        } else {
          static_assert(std::is_same_v<T, F::Compare>);
          if (x.terms.size() != y.terms.size() || x.rel != y.rel || x.rhs != y.rhs ||
              !(x.poly == y.poly))
            return false;
          for (std::size_t i = 0; i < x.terms.size(); ++i)
            if (!equal(x.terms[i], y.terms[i])) return false;
          return true;
        }
      },
      a->node);
}

// --------------------------------------------------------------------------
// Printing. Precedence: quantifier/compare 0 < and 1 < until 2 < unary 3 < atom 4.
// The top-level call uses 0, so compares and quantifiers parenthesize exactly
// when nested. Right operands of binary nodes are printed one level tighter,
// which keeps printing/parsing mutually inverse on the shared associativity.

namespace {

std::string poly_with_terms(const Polynomial& poly, const std::vector<std::string>& names,
                            const Rational& rhs, Rel rel) {
  return poly.str(names) + " " + rel_text(rel) + " " + rhs.str();
}

std::string print_k(const FormulaKPtr& f, int min_prec);

std::string print_k_unary(const char* op, const FormulaKPtr& a, int min_prec) {
  std::string body = std::string(op) + " " + print_k(a, 3);
  return min_prec > 3 ? "(" + body + ")" : body;
}

std::string print_k(const FormulaKPtr& f, int min_prec) {
  using F = FormulaK;
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::True>) {
          return "true";
        } else if constexpr (std::is_same_v<T, F::Prop>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, F::Not>) {
          if (std::holds_alternative<F::True>(x.a->node)) return "false";
          // G sugar: !(true U !p) and its bounded variant.
          if (const auto* u = std::get_if<F::Until>(&x.a->node)) {
            if (std::holds_alternative<F::True>(u->a->node)) {
              if (const auto* n = std::get_if<F::Not>(&u->b->node))
                return print_k_unary("G", n->a, min_prec);
            }
          }
          if (const auto* u = std::get_if<F::BoundedUntil>(&x.a->node)) {
            if (std::holds_alternative<F::True>(u->a->node)) {
              if (const auto* n = std::get_if<F::Not>(&u->b->node))
                return print_k_unary(("G<=" + std::to_string(u->bound)).c_str(), n->a, min_prec);
            }
          }
          // E sugar: !A!p.
          if (const auto* all = std::get_if<F::AllRuns>(&x.a->node)) {
            if (const auto* n = std::get_if<F::Not>(&all->a->node))
              return print_k_unary("E", n->a, min_prec);
          }
          std::string body = "!" + print_k(x.a, 3);
          return min_prec > 3 ? "(" + body + ")" : body;
        } else if constexpr (std::is_same_v<T, F::And>) {
          std::string body = print_k(x.a, 1) + " & " + print_k(x.b, 2);
          return min_prec > 1 ? "(" + body + ")" : body;
        } else if constexpr (std::is_same_v<T, F::AllRuns>) {
          return print_k_unary("A", x.a, min_prec);
        } else if constexpr (std::is_same_v<T, F::Next>) {
          return print_k_unary("X", x.a, min_prec);
        } else if constexpr (std::is_same_v<T, F::Until>) {
          if (std::holds_alternative<F::True>(x.a->node)) return print_k_unary("F", x.b, min_prec);
          std::string body = print_k(x.a, 3) + " U " + print_k(x.b, 2);
          return min_prec > 2 ? "(" + body + ")" : body;
        } else if constexpr (std::is_same_v<T, F::BoundedUntil>) {
          std::string op = "U<=" + std::to_string(x.bound);
          if (std::holds_alternative<F::True>(x.a->node))
            return print_k_unary(("F<=" + std::to_string(x.bound)).c_str(), x.b, min_prec);
          std::string body = print_k(x.a, 3) + " " + op + " " + print_k(x.b, 2);
          return min_prec > 2 ? "(" + body + ")" : body;
        } else if constexpr (std::is_same_v<T, F::Know>) {
          return print_k_unary(("K[" + x.agent + "]").c_str(), x.a, min_prec);
        } else {
          static_assert(std::is_same_v<T, F::Compare>);
          std::vector<std::string> names;
          for (const auto& t : x.terms) names.push_back(to_string(t));
          std::string body = poly_with_terms(x.poly, names, x.rhs, x.rel);
          return min_prec > 0 ? "(" + body + ")" : body;
        }
      },
      f->node);
}

} // namespace

std::string to_string(const ProbTermK& t) {
  return std::string(t.kind == ProbKind::current ? "Pr" : "Prior") + "[" + t.agent + "](" +
         print_k(t.body, 0) + ")";
}

std::string to_string(const FormulaKPtr& f) { return print_k(f, 0); }

std::string to_string(const TimeTerm& t) {
  return t.is_variable() ? t.var : std::to_string(t.value);
}

namespace {

std::string print_w(const FormulaWPtr& f, int min_prec);

std::string print_w_unary(const std::string& op, const FormulaWPtr& a, int min_prec) {
  std::string body = op + " " + print_w(a, 3);
  return min_prec > 3 ? "(" + body + ")" : body;
}

std::string print_w(const FormulaWPtr& f, int min_prec) {
  using F = FormulaW;
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::True>) {
          return "true";
        } else if constexpr (std::is_same_v<T, F::PropAt>) {
          return x.name + "@" + to_string(x.at);
        } else if constexpr (std::is_same_v<T, F::SetAt>) {
          return x.set + "@" + to_string(x.at);
        } else if constexpr (std::is_same_v<T, F::Less>) {
          return to_string(x.a) + " < " + to_string(x.b);
        } else if constexpr (std::is_same_v<T, F::Not>) {
          if (std::holds_alternative<F::True>(x.a->node)) return "false";
          std::string body = "!" + print_w(x.a, 3);
          return min_prec > 3 ? "(" + body + ")" : body;
        } else if constexpr (std::is_same_v<T, F::And>) {
          std::string body = print_w(x.a, 1) + " & " + print_w(x.b, 2);
          return min_prec > 1 ? "(" + body + ")" : body;
        } else if constexpr (std::is_same_v<T, F::KnowAt>) {
          return print_w_unary("K[" + x.agent + "]@" + to_string(x.at), x.a, min_prec);
        } else if constexpr (std::is_same_v<T, F::ForallT>) {
          std::string body = "forall " + x.var + " . " + print_w(x.a, 0);
          return min_prec > 0 ? "(" + body + ")" : body;
        } else if constexpr (std::is_same_v<T, F::ExistsT>) {
          std::string body = "exists " + x.var + " . " + print_w(x.a, 0);
          return min_prec > 0 ? "(" + body + ")" : body;
        } else if constexpr (std::is_same_v<T, F::ForallSet>) {
          std::string body = "forallset " + x.set + " . " + print_w(x.a, 0);
          return min_prec > 0 ? "(" + body + ")" : body;
        } else {
          static_assert(std::is_same_v<T, F::Compare>);
          std::vector<std::string> names;
          for (const auto& t : x.terms) names.push_back(to_string(t));
          std::string body = poly_with_terms(x.poly, names, x.rhs, x.rel);
          return min_prec > 0 ? "(" + body + ")" : body;
        }
      },
      f->node);
}

} // namespace

std::string to_string(const ProbTermW& t) {
  switch (t.kind) {
    case ProbTermW::Kind::global: return "P(" + print_w(t.body, 0) + ")";
    case ProbTermW::Kind::agent_at:
      return "Pr[" + t.agent + "]@" + to_string(t.at) + "(" + print_w(t.body, 0) + ")";
    case ProbTermW::Kind::conditional:
      return "P(" + print_w(t.body, 0) + " | " + print_w(t.given, 0) + ")";
  }
  return "?";
}

std::string to_string(const FormulaWPtr& f) { return print_w(f, 0); }

// --------------------------------------------------------------------------
// Shapes and depth.

bool is_propositional(const FormulaKPtr& f) {
  using F = FormulaK;
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::True> || std::is_same_v<T, F::Prop>) {
          return true;
        } else if constexpr (std::is_same_v<T, F::Not>) {
          return is_propositional(x.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return is_propositional(x.a) && is_propositional(x.b);
        } else {
          return false;
        }
      },
      f->node);
}

std::optional<FormulaKPtr> match_eventually_shape(const FormulaKPtr& f) {
  if (const auto* u = std::get_if<FormulaK::Until>(&f->node)) {
    if (std::holds_alternative<FormulaK::True>(u->a->node) && is_propositional(u->b))
      return u->b;
  }
  return std::nullopt;
}

std::optional<FormulaKPtr> match_globally_shape(const FormulaKPtr& f) {
  if (const auto* n = std::get_if<FormulaK::Not>(&f->node)) {
    if (auto p = match_eventually_shape(n->a)) {
      if (const auto* inner = std::get_if<FormulaK::Not>(&(*p)->node)) return inner->a;
      return k_not(*p);
    }
  }
  return std::nullopt;
}

std::optional<QualitativeCompare> match_qualitative_compare(const FormulaK::Compare& cmp) {
  if (cmp.terms.size() != 1) return std::nullopt;
  if (!(cmp.poly == Polynomial::variable(0))) return std::nullopt;
  if (!(cmp.rhs == Rational(0) || cmp.rhs == Rational(1))) return std::nullopt;
  const ProbTermK& t = cmp.terms[0];
  if (auto p = match_eventually_shape(t.body))
    return QualitativeCompare{t.kind, t.agent, true, *p, cmp.rel, cmp.rhs};
  if (auto p = match_globally_shape(t.body))
    return QualitativeCompare{t.kind, t.agent, false, *p, cmp.rel, cmp.rhs};
  return std::nullopt;
}

std::optional<unsigned long> temporal_depth(const FormulaKPtr& f) {
  using F = FormulaK;
  return std::visit(
      [&](const auto& x) -> std::optional<unsigned long> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::True> || std::is_same_v<T, F::Prop>) {
          return 0UL;
        } else if constexpr (std::is_same_v<T, F::Not> || std::is_same_v<T, F::AllRuns>) {
          return temporal_depth(x.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          auto da = temporal_depth(x.a), db = temporal_depth(x.b);
          if (!da || !db) return std::nullopt;
          return std::max(*da, *db);
        } else if constexpr (std::is_same_v<T, F::Next>) {
          auto d = temporal_depth(x.a);
          if (!d) return std::nullopt;
          return *d + 1;
        } else if constexpr (std::is_same_v<T, F::Until>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, F::BoundedUntil>) {
          auto da = temporal_depth(x.a), db = temporal_depth(x.b);
          if (!da || !db) return std::nullopt;
          return x.bound + std::max(*da, *db);
        } else if constexpr (std::is_same_v<T, F::Know>) {
          if (match_eventually_shape(x.a)) return 0UL;
          return temporal_depth(x.a);
        } else {
          static_assert(std::is_same_v<T, F::Compare>);
          if (match_qualitative_compare(x)) return 0UL;
          unsigned long depth = 0;
          for (const auto& t : x.terms) {
            auto d = temporal_depth(t.body);
            if (!d) return std::nullopt;
            depth = std::max(depth, *d);
          }
          return depth;
        }
      },
      f->node);
}

// --------------------------------------------------------------------------
// WMLO structure queries.

namespace {

void collect_free(const FormulaWPtr& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  using F = FormulaW;
  auto note = [&](const TimeTerm& t) {
    if (t.is_variable() && !bound.count(t.var)) out.insert(t.var);
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::PropAt> || std::is_same_v<T, F::SetAt>) {
          note(x.at);
        } else if constexpr (std::is_same_v<T, F::Less>) {
          note(x.a);
          note(x.b);
        } else if constexpr (std::is_same_v<T, F::Not>) {
          collect_free(x.a, bound, out);
        } else if constexpr (std::is_same_v<T, F::And>) {
          collect_free(x.a, bound, out);
          collect_free(x.b, bound, out);
        } else if constexpr (std::is_same_v<T, F::KnowAt>) {
          note(x.at);
          collect_free(x.a, bound, out);
        } else if constexpr (std::is_same_v<T, F::ForallT> || std::is_same_v<T, F::ExistsT>) {
          bool fresh = bound.insert(x.var).second;
          collect_free(x.a, bound, out);
          if (fresh) bound.erase(x.var);
        } else if constexpr (std::is_same_v<T, F::ForallSet>) {
          collect_free(x.a, bound, out);
        } else if constexpr (std::is_same_v<T, F::Compare>) {
          for (const auto& t : x.terms) {
            if (t.kind == ProbTermW::Kind::agent_at) note(t.at);
            collect_free(t.body, bound, out);
            if (t.given) collect_free(t.given, bound, out);
          }
        }
      },
      f->node);
}

} // namespace

std::set<std::string> free_time_variables(const FormulaWPtr& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool contains_second_order(const FormulaWPtr& f) {
  using F = FormulaW;
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::SetAt> || std::is_same_v<T, F::ForallSet>) {
          return true;
        } else if constexpr (std::is_same_v<T, F::Not>) {
          return contains_second_order(x.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return contains_second_order(x.a) || contains_second_order(x.b);
        } else if constexpr (std::is_same_v<T, F::KnowAt>) {
          return contains_second_order(x.a);
        } else if constexpr (std::is_same_v<T, F::ForallT> || std::is_same_v<T, F::ExistsT>) {
          return contains_second_order(x.a);
        } else if constexpr (std::is_same_v<T, F::Compare>) {
          for (const auto& t : x.terms) {
            if (contains_second_order(t.body)) return true;
            if (t.given && contains_second_order(t.given)) return true;
          }
          return false;
        } else {
          return false;
        }
      },
      f->node);
}

bool contains_conditional(const FormulaWPtr& f) {
  using F = FormulaW;
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::Not>) {
          return contains_conditional(x.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return contains_conditional(x.a) || contains_conditional(x.b);
        } else if constexpr (std::is_same_v<T, F::KnowAt>) {
          return contains_conditional(x.a);
        } else if constexpr (std::is_same_v<T, F::ForallT> || std::is_same_v<T, F::ExistsT> ||
                             std::is_same_v<T, F::ForallSet>) {
          return contains_conditional(x.a);
        } else if constexpr (std::is_same_v<T, F::Compare>) {
          for (const auto& t : x.terms) {
            if (t.kind == ProbTermW::Kind::conditional) return true;
            if (contains_conditional(t.body)) return true;
            if (t.given && contains_conditional(t.given)) return true;
          }
          return false;
        } else {
          return false;
        }
      },
      f->node);
}

namespace {

TimeTerm subst_term(const TimeTerm& t, const std::string& var, unsigned long value) {
  if (t.is_variable() && t.var == var) return TimeTerm::constant(value);
  return t;
}

} // namespace

FormulaWPtr substitute_time(const FormulaWPtr& f, const std::string& var, unsigned long value) {
  using F = FormulaW;
  return std::visit(
      [&](const auto& x) -> FormulaWPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::True>) {
          return f;
        } else if constexpr (std::is_same_v<T, F::PropAt>) {
          return w_prop_at(x.name, subst_term(x.at, var, value));
        } else if constexpr (std::is_same_v<T, F::SetAt>) {
          return w_set_at(x.set, subst_term(x.at, var, value));
        } else if constexpr (std::is_same_v<T, F::Less>) {
          return w_less(subst_term(x.a, var, value), subst_term(x.b, var, value));
        } else if constexpr (std::is_same_v<T, F::Not>) {
          return w_not(substitute_time(x.a, var, value));
        } else if constexpr (std::is_same_v<T, F::And>) {
          return w_and(substitute_time(x.a, var, value), substitute_time(x.b, var, value));
        } else if constexpr (std::is_same_v<T, F::KnowAt>) {
          return w_know_at(x.agent, subst_term(x.at, var, value),
                           substitute_time(x.a, var, value));
        } else if constexpr (std::is_same_v<T, F::ForallT>) {
          if (x.var == var) return f;
          return w_forall(x.var, substitute_time(x.a, var, value));
        } else if constexpr (std::is_same_v<T, F::ExistsT>) {
          if (x.var == var) return f;
          return w_exists(x.var, substitute_time(x.a, var, value));
        } else if constexpr (std::is_same_v<T, F::ForallSet>) {
          return w_forall_set(x.set, substitute_time(x.a, var, value));
        } else {
          static_assert(std::is_same_v<T, F::Compare>);
          std::vector<ProbTermW> terms;
          for (const ProbTermW& t : x.terms) {
            ProbTermW copy = t;
            if (t.kind == ProbTermW::Kind::agent_at) copy.at = subst_term(t.at, var, value);
            copy.body = substitute_time(t.body, var, value);
            if (t.given) copy.given = substitute_time(t.given, var, value);
            terms.push_back(std::move(copy));
          }
          return w_compare(std::move(terms), x.poly, x.rel, x.rhs);
        }
      },
      f->node);
}

// --------------------------------------------------------------------------
// Mixed-time shape.

std::optional<MixedTimeFormula> to_mixed_time(const FormulaWPtr& f) {
  MixedTimeFormula out;
  const FormulaW* cur = f.get();
  while (const auto* ex = std::get_if<FormulaW::ExistsT>(&cur->node)) {
    out.vars.push_back(ex->var);
    cur = ex->a.get();
  }
  if (out.vars.empty()) return std::nullopt;
  const auto* cmp = std::get_if<FormulaW::Compare>(&cur->node);
  if (!cmp) return std::nullopt;
  for (const auto& t : cmp->terms) {
    if (t.kind != ProbTermW::Kind::global) return std::nullopt;
    const auto* atom = std::get_if<FormulaW::PropAt>(&t.body->node);
    if (!atom || !atom->at.is_variable()) return std::nullopt;
    std::size_t v = 0;
    for (; v < out.vars.size(); ++v)
      if (out.vars[v] == atom->at.var) break;
    if (v == out.vars.size()) return std::nullopt;
    out.atoms.push_back({atom->name, v});
  }
  out.poly = cmp->poly;
  out.rel = cmp->rel;
  out.rhs = cmp->rhs;
  return out;
}

FormulaWPtr from_mixed_time(const MixedTimeFormula& f) {
  std::vector<ProbTermW> terms;
  for (const auto& atom : f.atoms)
    terms.push_back(global_prob(w_prop_at(atom.prop, TimeTerm::variable(f.vars[atom.var]))));
  FormulaWPtr body = w_compare(std::move(terms), f.poly, f.rel, f.rhs);
  for (auto it = f.vars.rbegin(); it != f.vars.rend(); ++it) body = w_exists(*it, body);
  return body;
}

std::string to_string(const MixedTimeFormula& f) { return to_string(from_mixed_time(f)); }

// --------------------------------------------------------------------------

std::string to_string(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::holds: return "holds";
    case Verdict::Kind::fails: return "fails";
    case Verdict::Kind::witness: {
      std::string out = "witness";
      for (const auto& [var, val] : v.assignment) out += " " + var + "=" + std::to_string(val);
      return out;
    }
    case Verdict::Kind::no_witness_up_to:
      return "no-witness-up-to " + std::to_string(v.bound);
  }
  return "?";
}

} // namespace pomc
