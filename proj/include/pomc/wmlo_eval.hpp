#pragma once

#include <optional>

#include "pomc/formula.hpp"
#include "pomc/model.hpp"
#include "pomc/verdict.hpp"

namespace pomc {

/// Truth of the formula on every infinite run extending `run`, with every
/// quantifier ranging over [0, bound]. Conditional probability comparisons are
/// cleared first; set variables are rejected.
bool eval_wmlo_at(const PODTMC& m, Semantics sem, const FormulaWPtr& f, const PathPrefix& run,
                  unsigned long bound);

/// Sentence-level verdict with quantifiers truncated to [0, bound]. A leading
/// block of existential quantifiers over a body that no single run can settle
/// differently (nothing outside probability operators reads the run) is
/// answered by lexicographic search, reporting the first witness assignment or
/// NoWitnessUpTo(bound). Every other sentence is checked on all runs and
/// reported as Holds or Fails. `bound` may be omitted only for
/// quantifier-free sentences.
Verdict eval_wmlo(const PODTMC& m, Semantics sem, const FormulaWPtr& f,
                  std::optional<unsigned long> bound);

} // namespace pomc
