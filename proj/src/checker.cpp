#include "pomc/checker.hpp"

#include <map>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "pomc/belief.hpp"
#include "pomc/error.hpp"
#include "pomc/graph.hpp"

namespace pomc {

namespace {

/// First subformula whose until lacks a bound and falls outside the decidable
/// shapes; null when temporal_depth(f) is defined.
FormulaKPtr unbounded_offender(const FormulaKPtr& f) {
  using F = FormulaK;
  if (temporal_depth(f)) return nullptr;
  return std::visit(
      [&](const auto& x) -> FormulaKPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::Until>) {
          return f;
        } else if constexpr (std::is_same_v<T, F::Not> || std::is_same_v<T, F::AllRuns> ||
                             std::is_same_v<T, F::Next> || std::is_same_v<T, F::Know>) {
          return unbounded_offender(x.a);
        } else if constexpr (std::is_same_v<T, F::And> || std::is_same_v<T, F::BoundedUntil>) {
          if (FormulaKPtr g = unbounded_offender(x.a)) return g;
          return unbounded_offender(x.b);
        } else if constexpr (std::is_same_v<T, F::Compare>) {
          for (const ProbTermK& t : x.terms)
            if (FormulaKPtr g = unbounded_offender(t.body)) return g;
          return f;
        } else {
          return f;
        }
      },
      f->node);
}

[[noreturn]] void throw_unbounded(const FormulaKPtr& f) {
  FormulaKPtr g = unbounded_offender(f);
  throw Error(ErrorCode::unsupported_unbounded,
              "until without a bound outside a decidable shape: " + to_string(g ? g : f));
}

unsigned long require_depth(const FormulaKPtr& f) {
  auto d = temporal_depth(f);
  if (!d) throw_unbounded(f);
  return *d;
}

bool state_sat(const PODTMC& m, const FormulaKPtr& f, StateIndex s) {
  using F = FormulaK;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::True>) {
          return true;
        } else if constexpr (std::is_same_v<T, F::Prop>) {
          return m.state_satisfies(s, x.name);
        } else if constexpr (std::is_same_v<T, F::Not>) {
          return !state_sat(m, x.a, s);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return state_sat(m, x.a, s) && state_sat(m, x.b, s);
        } else {
          throw Error(ErrorCode::invalid_argument, "not propositional: " + to_string(f));
        }
      },
      f->node);
}

/// How far past its time a point's own prefix must reach to determine the
/// formula. Run quantifiers, knowledge, and probability operators range over
/// other runs, so they pin nothing beyond the current time; only X and
/// bounded until advance along the point's run.
unsigned long prefix_depth(const FormulaKPtr& f) {
  using F = FormulaK;
  return std::visit(
      [&](const auto& x) -> unsigned long {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::Not>) {
          return prefix_depth(x.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return std::max(prefix_depth(x.a), prefix_depth(x.b));
        } else if constexpr (std::is_same_v<T, F::Next>) {
          return prefix_depth(x.a) + 1;
        } else if constexpr (std::is_same_v<T, F::BoundedUntil>) {
          return x.bound + std::max(prefix_depth(x.a), prefix_depth(x.b));
        } else if constexpr (std::is_same_v<T, F::Until>) {
          throw_unbounded(f);
        } else {
          return 0UL;
        }
      },
      f->node);
}

bool contains_epistemic(const FormulaKPtr& f) {
  using F = FormulaK;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::Know> || std::is_same_v<T, F::Compare>) {
          return true;
        } else if constexpr (std::is_same_v<T, F::Not> || std::is_same_v<T, F::AllRuns> ||
                             std::is_same_v<T, F::Next>) {
          return contains_epistemic(x.a);
        } else if constexpr (std::is_same_v<T, F::And> || std::is_same_v<T, F::Until> ||
                             std::is_same_v<T, F::BoundedUntil>) {
          return contains_epistemic(x.a) || contains_epistemic(x.b);
        } else {
          return false;
        }
      },
      f->node);
}

/// Settles `Pr rel c` for c in {0, 1} from the two qualitative facts; uses
/// only that probabilities lie in [0, 1].
bool decide_qualitative(bool positive, bool almost_sure, Rel rel, const Rational& c) {
  if (c.is_zero()) {
    switch (rel) {
      case Rel::lt: return false;
      case Rel::le: return !positive;
      case Rel::eq: return !positive;
      case Rel::ge: return true;
      case Rel::gt: return positive;
    }
  }
  switch (rel) {
    case Rel::lt: return !almost_sure;
    case Rel::le: return true;
    case Rel::eq: return almost_sure;
    case Rel::ge: return almost_sure;
    case Rel::gt: return false;
  }
  return false;
}

void walk_prefixes(const PODTMC& m, std::size_t want, std::vector<StateIndex>& cur,
                   std::vector<PathPrefix>& out) {
  if (cur.size() == want) {
    out.push_back(PathPrefix{cur});
    return;
  }
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    const Rational& step = cur.empty() ? m.init[s] : m.trans.at(cur.back(), s);
    if (step.is_zero()) continue;
    cur.push_back(s);
    walk_prefixes(m, want, cur, out);
    cur.pop_back();
  }
}

void require_point(const PODTMC& m, const PointSpec& point) {
  if (point.prefix.states.empty())
    throw Error(ErrorCode::invalid_prefix, "a point needs at least the time-0 state");
  for (StateIndex s : point.prefix.states)
    if (s >= m.num_states())
      throw Error(ErrorCode::unknown_state, "state index " + std::to_string(s) + " out of range");
  if (cylinder_probability(m, point.prefix).is_zero())
    throw Error(ErrorCode::invalid_prefix, "prefix has probability 0");
}

/// Shared evaluation state for one batch of queries against a fixed model and
/// semantics. Memo entries key on formula node addresses, so every formula
/// evaluated must stay alive for the evaluator's lifetime.
class Evaluator {
public:
  Evaluator(const PODTMC& m, Semantics sem) : m_(m), sem_(sem) {}

  using Prefix = std::vector<StateIndex>;

  bool eval(const FormulaKPtr& f, const Prefix& q, std::size_t t);
  Rational prob(const ProbTermK& term, const Prefix& q, std::size_t t);

private:
  using WeightedPrefixes = std::vector<std::pair<Prefix, Rational>>;

  struct Shape {
    unsigned long pin;
    bool run_local; // truth depends on q[t..t+pin] alone, not the past or t
  };

  const PODTMC& m_;
  Semantics sem_;
  std::map<const FormulaK*, Shape> shapes_;
  std::map<std::tuple<const FormulaK*, Prefix, std::size_t>, bool> eval_memo_;
  std::map<std::pair<const FormulaK*, std::string>, bool> local_memo_;
  std::map<std::pair<const void*, std::string>, Rational> term_memo_;
  std::map<std::string, WeightedPrefixes> prefix_memo_;

  const Shape& shape(const FormulaKPtr& f) {
    auto it = shapes_.find(f.get());
    if (it != shapes_.end()) return it->second;
    Shape s{prefix_depth(f), !contains_epistemic(f)};
    return shapes_.emplace(f.get(), s).first->second;
  }

  std::string local_key(const std::string& agent, const Prefix& q, std::size_t t) const {
    AgentRef ref = m_.resolve_agent(agent);
    std::string key = agent + " " + std::to_string(t);
    if (sem_ == Semantics::clk) return key + " " + m_.observation(ref, q[t]);
    for (std::size_t j = 0; j <= t; ++j) key += " " + m_.observation(ref, q[j]);
    return key;
  }

  BeliefState belief_at(const std::string& agent, const Prefix& q, std::size_t t) const {
    AgentRef ref = m_.resolve_agent(agent);
    if (sem_ == Semantics::clk) return clock_belief(m_, ref, t, m_.observation(ref, q[t]));
    ObservationSequence h{ref, {}};
    for (std::size_t j = 0; j <= t; ++j) h.symbols.push_back(m_.observation(ref, q[j]));
    return spr_belief(m_, h);
  }

  std::vector<char> support_mask(const BeliefState& b) const {
    std::vector<char> mask(m_.num_states(), 0);
    for (StateIndex s : knowledge_support(b)) mask[s] = 1;
    return mask;
  }

  std::vector<char> formula_mask(const FormulaKPtr& p) const {
    std::vector<char> mask(m_.num_states());
    for (StateIndex s = 0; s < m_.num_states(); ++s) mask[s] = state_sat(m_, p, s);
    return mask;
  }

  void extend(Prefix& cur, unsigned long left, const Rational& w, WeightedPrefixes& out) const {
    if (left == 0) {
      out.emplace_back(cur, w);
      return;
    }
    StateIndex from = cur.back();
    for (StateIndex s = 0; s < m_.num_states(); ++s) {
      const Rational& p = m_.trans.at(from, s);
      if (p.is_zero()) continue;
      cur.push_back(s);
      extend(cur, left - 1, w * p, out);
      cur.pop_back();
    }
  }

  WeightedPrefixes extensions(const Prefix& base, unsigned long depth) const {
    WeightedPrefixes out;
    Prefix cur = base;
    extend(cur, depth, Rational(1), out);
    return out;
  }

  void walk_matching(const AgentRef& ref, const std::vector<std::string>& want, Prefix& cur,
                     const Rational& w, WeightedPrefixes& out) const {
    std::size_t j = cur.size();
    if (j == want.size()) {
      out.emplace_back(cur, w);
      return;
    }
    for (StateIndex s = 0; s < m_.num_states(); ++s) {
      const Rational& step = j == 0 ? m_.init[s] : m_.trans.at(cur.back(), s);
      if (step.is_zero()) continue;
      if (!want[j].empty() && m_.observation(ref, s) != want[j]) continue;
      cur.push_back(s);
      walk_matching(ref, want, cur, w * step, out);
      cur.pop_back();
    }
  }

  /// Positive-probability prefixes sharing the point's local state, with
  /// their cylinder weights. Under clk only the final observation constrains
  /// the walk; under spr every step does.
  const WeightedPrefixes& matching_prefixes(const std::string& agent, const Prefix& q,
                                            std::size_t t) {
    std::string key = local_key(agent, q, t);
    auto it = prefix_memo_.find(key);
    if (it != prefix_memo_.end()) return it->second;
    AgentRef ref = m_.resolve_agent(agent);
    std::vector<std::string> want(t + 1);
    if (sem_ == Semantics::spr)
      for (std::size_t j = 0; j <= t; ++j) want[j] = m_.observation(ref, q[j]);
    else
      want[t] = m_.observation(ref, q[t]);
    WeightedPrefixes out;
    Prefix cur;
    walk_matching(ref, want, cur, Rational(1), out);
    return prefix_memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  bool eval_node(const FormulaKPtr& f, const Prefix& q, std::size_t t);
  bool eval_know(const FormulaKPtr& f, const FormulaK::Know& x, const Prefix& q, std::size_t t);
  bool eval_compare(const FormulaKPtr& f, const FormulaK::Compare& x, const Prefix& q,
                    std::size_t t);
  bool eval_qualitative(const QualitativeCompare& qc, const Prefix& q, std::size_t t);
};

bool Evaluator::eval(const FormulaKPtr& f, const Prefix& q, std::size_t t) {
  const Shape& s = shape(f);
  Prefix window(q.begin() + static_cast<std::ptrdiff_t>(s.run_local ? t : 0),
                q.begin() + static_cast<std::ptrdiff_t>(t + s.pin + 1));
  auto key = std::make_tuple(f.get(), std::move(window), s.run_local ? 0 : t);
  auto it = eval_memo_.find(key);
  if (it != eval_memo_.end()) return it->second;
  bool v = eval_node(f, q, t);
  eval_memo_.emplace(std::move(key), v);
  return v;
}

bool Evaluator::eval_node(const FormulaKPtr& f, const Prefix& q, std::size_t t) {
  using F = FormulaK;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::True>) {
          return true;
        } else if constexpr (std::is_same_v<T, F::Prop>) {
          return m_.state_satisfies(q[t], x.name);
        } else if constexpr (std::is_same_v<T, F::Not>) {
          return !eval(x.a, q, t);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return eval(x.a, q, t) && eval(x.b, q, t);
        } else if constexpr (std::is_same_v<T, F::AllRuns>) {
          Prefix base(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(t + 1));
          for (const auto& [ext, w] : extensions(base, shape(x.a).pin))
            if (!eval(x.a, ext, t)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, F::Next>) {
          return eval(x.a, q, t + 1);
        } else if constexpr (std::is_same_v<T, F::Until>) {
          throw_unbounded(f);
        } else if constexpr (std::is_same_v<T, F::BoundedUntil>) {
          for (std::size_t j = t; j <= t + x.bound; ++j) {
            if (eval(x.b, q, j)) return true;
            if (!eval(x.a, q, j)) return false;
          }
          return false;
        } else if constexpr (std::is_same_v<T, F::Know>) {
          return eval_know(f, x, q, t);
        } else {
          static_assert(std::is_same_v<T, F::Compare>);
          return eval_compare(f, x, q, t);
        }
      },
      f->node);
}

bool Evaluator::eval_know(const FormulaKPtr& f, const FormulaK::Know& x, const Prefix& q,
                          std::size_t t) {
  auto key = std::make_pair(f.get(), local_key(x.agent, q, t));
  auto it = local_memo_.find(key);
  if (it != local_memo_.end()) return it->second;

  bool v;
  if (auto target = match_eventually_shape(x.a)) {
    // K_i(F p) fails exactly when some considered-possible state starts an
    // infinite path avoiding p.
    std::vector<char> target_mask = formula_mask(*target);
    std::vector<char> avoid(m_.num_states());
    for (StateIndex s = 0; s < m_.num_states(); ++s) avoid[s] = !target_mask[s];
    v = !exists_path_globally(m_, support_mask(belief_at(x.agent, q, t)), avoid);
  } else {
    v = true;
    unsigned long pin = shape(x.a).pin;
    for (const auto& [p, w] : matching_prefixes(x.agent, q, t)) {
      for (const auto& [ext, ew] : extensions(p, pin))
        if (!eval(x.a, ext, t)) {
          v = false;
          break;
        }
      if (!v) break;
    }
  }
  local_memo_.emplace(std::move(key), v);
  return v;
}

bool Evaluator::eval_compare(const FormulaKPtr& f, const FormulaK::Compare& x, const Prefix& q,
                             std::size_t t) {
  if (auto qc = match_qualitative_compare(x)) {
    std::size_t bt = qc->kind == ProbKind::prior ? 0 : t;
    auto key = std::make_pair(f.get(), local_key(qc->agent, q, bt));
    auto it = local_memo_.find(key);
    if (it != local_memo_.end()) return it->second;
    bool v = eval_qualitative(*qc, q, bt);
    local_memo_.emplace(std::move(key), v);
    return v;
  }
  std::vector<Rational> values;
  values.reserve(x.terms.size());
  for (const ProbTermK& term : x.terms) values.push_back(prob(term, q, t));
  return rel_holds(x.poly.eval(values), x.rel, x.rhs);
}

bool Evaluator::eval_qualitative(const QualitativeCompare& qc, const Prefix& q, std::size_t t) {
  BeliefState b = belief_at(qc.agent, q, t);
  std::vector<char> target = formula_mask(qc.target);
  std::vector<char> support = support_mask(b);
  std::vector<char> reach = reachable_states(m_, support);

  bool positive, almost_sure;
  if (qc.eventually) {
    positive = false;
    for (StateIndex s = 0; s < m_.num_states(); ++s) positive = positive || (reach[s] && target[s]);
    // Pr(F p) = 1 iff no positive-probability bundle of runs avoids p forever.
    std::vector<char> avoid(m_.num_states());
    for (StateIndex s = 0; s < m_.num_states(); ++s) avoid[s] = !target[s];
    almost_sure = !prob_globally_positive(m_, b.posterior, avoid);
  } else {
    positive = prob_globally_positive(m_, b.posterior, target);
    // Pr(G p) = 1 iff nothing outside p is reachable at all.
    almost_sure = true;
    for (StateIndex s = 0; s < m_.num_states(); ++s)
      if (reach[s] && !target[s]) almost_sure = false;
  }
  return decide_qualitative(positive, almost_sure, qc.rel, qc.rhs);
}

Rational Evaluator::prob(const ProbTermK& term, const Prefix& q, std::size_t t) {
  std::size_t bt = term.kind == ProbKind::prior ? 0 : t;
  auto key = std::make_pair(static_cast<const void*>(&term), local_key(term.agent, q, bt));
  auto it = term_memo_.find(key);
  if (it != term_memo_.end()) return it->second;

  Rational v;
  if (is_propositional(term.body)) {
    // The body's truth depends on the current state alone, so the posterior
    // marginal already carries the answer.
    BeliefState b = belief_at(term.agent, q, bt);
    for (StateIndex s = 0; s < m_.num_states(); ++s)
      if (!b.posterior[s].is_zero() && state_sat(m_, term.body, s)) v += b.posterior[s];
  } else {
    unsigned long pin = shape(term.body).pin;
    Rational num, total;
    for (const auto& [p, w] : matching_prefixes(term.agent, q, bt)) {
      total += w;
      for (const auto& [ext, ew] : extensions(p, pin))
        if (eval(term.body, ext, bt)) num += w * ew;
    }
    v = num / total;
  }
  term_memo_.emplace(std::move(key), v);
  return v;
}

} // namespace

std::vector<PathPrefix> reachable_prefixes(const PODTMC& m, unsigned long t) {
  std::vector<PathPrefix> out;
  std::vector<StateIndex> cur;
  walk_prefixes(m, t + 1, cur, out);
  return out;
}

bool eval_point(const PODTMC& m, Semantics sem, const FormulaKPtr& f, const PointSpec& point,
                unsigned long horizon) {
  require_point(m, point);
  unsigned long d = require_depth(f);
  if (point.time() + d > horizon)
    throw Error(ErrorCode::horizon_too_small, "need horizon " + std::to_string(point.time() + d) +
                                                  ", have " + std::to_string(horizon));
  // Truth at a point is truth on every run extending the prefix; for state
  // formulas the quantifier is vacuous.
  FormulaKPtr closed = k_all(f);
  Evaluator ev(m, sem);
  return ev.eval(closed, point.prefix.states, point.time());
}

Rational eval_prob_term(const PODTMC& m, Semantics sem, const ProbTermK& term,
                        const PointSpec& point, unsigned long horizon) {
  require_point(m, point);
  unsigned long d = require_depth(term.body);
  std::size_t bt = term.kind == ProbKind::prior ? 0 : point.time();
  if (bt + d > horizon)
    throw Error(ErrorCode::horizon_too_small,
                "need horizon " + std::to_string(bt + d) + ", have " + std::to_string(horizon));
  Evaluator ev(m, sem);
  return ev.prob(term, point.prefix.states, point.time());
}

Verdict model_check(const PODTMC& m, Semantics sem, const FormulaKPtr& f) {
  require_depth(f);
  FormulaKPtr closed = k_all(f);
  Evaluator ev(m, sem);
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    if (m.init[s].is_zero()) continue;
    if (!ev.eval(closed, {s}, 0)) return Verdict::fails();
  }
  return Verdict::holds();
}

bool prop5_equivalence(const PODTMC& m, Semantics sem, const FormulaKPtr& f,
                       unsigned long max_time) {
  std::vector<FormulaKPtr> knows, compares;
  for (const std::string& agent : m.agents) {
    knows.push_back(k_know(agent, f));
    compares.push_back(k_compare({ProbTermK{ProbKind::current, agent, f}},
                                 Polynomial::variable(0), Rel::eq, Rational(1)));
    require_depth(knows.back());
    require_depth(compares.back());
  }
  Evaluator ev(m, sem);
  for (unsigned long t = 0; t <= max_time; ++t)
    for (const PathPrefix& p : reachable_prefixes(m, t))
      for (std::size_t k = 0; k < knows.size(); ++k)
        if (ev.eval(knows[k], p.states, t) != ev.eval(compares[k], p.states, t)) return false;
  return true;
}

} // namespace pomc
