#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pomc/polynomial.hpp"
#include "pomc/rational.hpp"

namespace pomc {

enum class Rel { lt, le, eq, ge, gt };

const char* rel_text(Rel r);
bool rel_holds(const Rational& lhs, Rel r, const Rational& rhs);

// ---------------------------------------------------------------------------
// Branching temporal-epistemic formulas.
//
// Core connectives only: true, propositions, negation, conjunction, the
// universal run quantifier A, next, (bounded) until, knowledge, and
// polynomial comparisons over probability terms. Everything else
// (false, or, implies, E, F, G) is parser sugar over these.

struct FormulaK;
using FormulaKPtr = std::shared_ptr<const FormulaK>;

enum class ProbKind { current, prior };

/// One basic probability term Pr_i(phi) or Prior_i(phi); Compare's polynomial
/// treats the k-th entry of its term list as variable k.
struct ProbTermK {
  ProbKind kind;
  std::string agent;
  FormulaKPtr body;
};

struct FormulaK {
  struct True {};
  struct Prop {
    std::string name;
  };
  struct Not {
    FormulaKPtr a;
  };
  struct And {
    FormulaKPtr a, b;
  };
  struct AllRuns {
    FormulaKPtr a;
  };
  struct Next {
    FormulaKPtr a;
  };
  struct Until {
    FormulaKPtr a, b;
  };
  struct BoundedUntil {
    FormulaKPtr a, b;
    unsigned long bound;
  };
  struct Know {
    std::string agent;
    FormulaKPtr a;
  };
  struct Compare {
    std::vector<ProbTermK> terms;
    Polynomial poly; // over variables 0..terms.size()-1, no constant term
    Rel rel;
    Rational rhs;
  };

  using Node =
      std::variant<True, Prop, Not, And, AllRuns, Next, Until, BoundedUntil, Know, Compare>;
  Node node;
};

FormulaKPtr k_true();
FormulaKPtr k_false();
FormulaKPtr k_prop(std::string name);
FormulaKPtr k_not(FormulaKPtr a);
FormulaKPtr k_and(FormulaKPtr a, FormulaKPtr b);
FormulaKPtr k_or(FormulaKPtr a, FormulaKPtr b);
FormulaKPtr k_implies(FormulaKPtr a, FormulaKPtr b);
FormulaKPtr k_all(FormulaKPtr a);
FormulaKPtr k_exists(FormulaKPtr a);
FormulaKPtr k_next(FormulaKPtr a);
FormulaKPtr k_until(FormulaKPtr a, FormulaKPtr b);
FormulaKPtr k_bounded_until(FormulaKPtr a, FormulaKPtr b, unsigned long bound);
FormulaKPtr k_eventually(FormulaKPtr a);
FormulaKPtr k_eventually_bounded(FormulaKPtr a, unsigned long bound);
FormulaKPtr k_globally(FormulaKPtr a);
FormulaKPtr k_globally_bounded(FormulaKPtr a, unsigned long bound);
FormulaKPtr k_know(std::string agent, FormulaKPtr a);
FormulaKPtr k_compare(std::vector<ProbTermK> terms, Polynomial poly, Rel rel, Rational rhs);

bool equal(const FormulaKPtr& a, const FormulaKPtr& b);
bool equal(const ProbTermK& a, const ProbTermK& b);
std::string to_string(const FormulaKPtr& f);
std::string to_string(const ProbTermK& t);

/// True/Prop/Not/And only.
bool is_propositional(const FormulaKPtr& f);

/// Matches `true U p` with propositional p; returns p.
std::optional<FormulaKPtr> match_eventually_shape(const FormulaKPtr& f);
/// Matches `!(true U p)` with propositional p, i.e. G !p; returns !p.
std::optional<FormulaKPtr> match_globally_shape(const FormulaKPtr& f);

/// Compare nodes of the form  1*Pr_i(F p) rel c  or  1*Pr_i(G p) rel c  with
/// c in {0, 1}; decidable by graph analysis without a horizon.
struct QualitativeCompare {
  ProbKind kind;
  std::string agent;
  bool eventually; // true: F target, false: G target
  FormulaKPtr target;
  Rel rel;
  Rational rhs;
};
std::optional<QualitativeCompare> match_qualitative_compare(const FormulaK::Compare& cmp);

/// Steps of lookahead needed to determine the formula at a point; nullopt when
/// an unbounded until occurs outside the qualitative shapes above.
std::optional<unsigned long> temporal_depth(const FormulaKPtr& f);

// ---------------------------------------------------------------------------
// Weak monadic logic with knowledge and probability operators.

/// A time position: a variable name or a concrete time.
struct TimeTerm {
  std::string var; // empty means constant
  unsigned long value = 0;

  static TimeTerm variable(std::string name) { return {std::move(name), 0}; }
  static TimeTerm constant(unsigned long v) { return {"", v}; }
  bool is_variable() const { return !var.empty(); }

  bool operator==(const TimeTerm& o) const
  {
    return var == o.var && (is_variable() || value == o.value);
  }
};

std::string to_string(const TimeTerm& t);

struct FormulaW;
using FormulaWPtr = std::shared_ptr<const FormulaW>;

/// Probability terms: P(phi), Pr[i]@t(phi), or the parse-only P(phi | psi).
struct ProbTermW {
  enum class Kind { global, agent_at, conditional };
  Kind kind;
  std::string agent; // agent_at only
  TimeTerm at;       // agent_at only
  FormulaWPtr body;
  FormulaWPtr given; // conditional only
};

struct FormulaW {
  struct True {};
  struct PropAt {
    std::string name;
    TimeTerm at;
  };
  struct SetAt { // parse-only; evaluation rejects it
    std::string set;
    TimeTerm at;
  };
  struct Less {
    TimeTerm a, b;
  };
  struct Not {
    FormulaWPtr a;
  };
  struct And {
    FormulaWPtr a, b;
  };
  struct KnowAt {
    std::string agent;
    TimeTerm at;
    FormulaWPtr a;
  };
  struct ForallT {
    std::string var;
    FormulaWPtr a;
  };
  struct ExistsT {
    std::string var;
    FormulaWPtr a;
  };
  struct ForallSet { // parse-only; evaluation rejects it
    std::string set;
    FormulaWPtr a;
  };
  struct Compare {
    std::vector<ProbTermW> terms;
    Polynomial poly;
    Rel rel;
    Rational rhs;
  };

  using Node = std::variant<True, PropAt, SetAt, Less, Not, And, KnowAt, ForallT, ExistsT,
                            ForallSet, Compare>;
  Node node;
};

FormulaWPtr w_true();
FormulaWPtr w_false();
FormulaWPtr w_prop_at(std::string name, TimeTerm at);
FormulaWPtr w_set_at(std::string set, TimeTerm at);
FormulaWPtr w_less(TimeTerm a, TimeTerm b);
FormulaWPtr w_time_eq(const TimeTerm& a, const TimeTerm& b);
FormulaWPtr w_time_le(const TimeTerm& a, const TimeTerm& b);
FormulaWPtr w_not(FormulaWPtr a);
FormulaWPtr w_and(FormulaWPtr a, FormulaWPtr b);
FormulaWPtr w_or(FormulaWPtr a, FormulaWPtr b);
FormulaWPtr w_implies(FormulaWPtr a, FormulaWPtr b);
FormulaWPtr w_know_at(std::string agent, TimeTerm at, FormulaWPtr a);
FormulaWPtr w_forall(std::string var, FormulaWPtr a);
FormulaWPtr w_exists(std::string var, FormulaWPtr a);
FormulaWPtr w_forall_set(std::string set, FormulaWPtr a);
FormulaWPtr w_compare(std::vector<ProbTermW> terms, Polynomial poly, Rel rel, Rational rhs);

ProbTermW global_prob(FormulaWPtr body);
ProbTermW agent_prob_at(std::string agent, TimeTerm at, FormulaWPtr body);
ProbTermW cond_prob(FormulaWPtr body, FormulaWPtr given);

bool equal(const FormulaWPtr& a, const FormulaWPtr& b);
bool equal(const ProbTermW& a, const ProbTermW& b);
std::string to_string(const FormulaWPtr& f);
std::string to_string(const ProbTermW& t);

std::set<std::string> free_time_variables(const FormulaWPtr& f);
bool contains_second_order(const FormulaWPtr& f);
bool contains_conditional(const FormulaWPtr& f);

/// Replaces every free occurrence of the time variable with a constant.
FormulaWPtr substitute_time(const FormulaWPtr& f, const std::string& var, unsigned long value);

// ---------------------------------------------------------------------------
// Existentially quantified polynomial questions over time-indexed marginals:
//   exists t_0 .. t_{k-1} .  poly over P(prop@t_vars) rel rhs.

struct MixedAtom {
  std::string prop;
  std::size_t var; // index into MixedTimeFormula::vars
  bool operator==(const MixedAtom& o) const { return prop == o.prop && var == o.var; }
};

struct MixedTimeFormula {
  std::vector<std::string> vars;
  std::vector<MixedAtom> atoms; // poly variable k is atoms[k]
  Polynomial poly;
  Rel rel;
  Rational rhs;
};

/// Shape check: an ExistsT chain over a Compare whose terms are all
/// GlobalProb of a single proposition at a single quantified variable.
std::optional<MixedTimeFormula> to_mixed_time(const FormulaWPtr& f);
FormulaWPtr from_mixed_time(const MixedTimeFormula& f);
std::string to_string(const MixedTimeFormula& f);

} // namespace pomc
