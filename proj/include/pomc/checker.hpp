#pragma once

#include "pomc/formula.hpp"
#include "pomc/model.hpp"
#include "pomc/verdict.hpp"

namespace pomc {

/// A concrete evaluation point: the run segment seen so far. The point's time
/// is the last index of the prefix, and the prefix must have positive
/// probability.
struct PointSpec {
  PathPrefix prefix;

  std::size_t time() const { return prefix.time(); }
};

/// All positive-probability prefixes with time t, in lexicographic state
/// order.
std::vector<PathPrefix> reachable_prefixes(const PODTMC& m, unsigned long t);

/// Exact truth of f at the point. `horizon` is an absolute time cap: it must
/// be at least point time plus the lookahead f needs, and evaluation never
/// inspects states past it.
bool eval_point(const PODTMC& m, Semantics sem, const FormulaKPtr& f, const PointSpec& point,
                unsigned long horizon);

/// Exact value of one probability term at the point.
Rational eval_prob_term(const PODTMC& m, Semantics sem, const ProbTermK& term,
                        const PointSpec& point, unsigned long horizon);

/// Holds iff f is true at every time-0 point, one per positive-init state.
Verdict model_check(const PODTMC& m, Semantics sem, const FormulaKPtr& f);

/// Whether K_i(f) and Pr_i(f) = 1 agree for every model agent at every
/// reachable point with time <= max_time. Guaranteed for f without temporal
/// operators; refutable otherwise.
bool prop5_equivalence(const PODTMC& m, Semantics sem, const FormulaKPtr& f,
                       unsigned long max_time);

} // namespace pomc
