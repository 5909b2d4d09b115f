#pragma once

#include <string>

#include "pomc/formula.hpp"
#include "pomc/model.hpp"

namespace pomc {

/// Rewrites a branching formula into the first-order logic with `time_var` as
/// its single free variable, preserving satisfaction point-for-point under the
/// chosen semantics. The clock translation of A pins the initial state with
/// "@state_<name>" propositions, so evaluate against a model that carries them.
FormulaWPtr translate_prop2(const FormulaKPtr& f, Semantics sem, const PODTMC& model,
                            const std::string& time_var = "t");

/// Under clock semantics, rewrites every agent knowledge operator into
/// observation-guarded universal knowledge and every agent probability term
/// into a denominator-free comparison of run probabilities.
FormulaWPtr eliminate_clock(const FormulaWPtr& f, const PODTMC& model);

/// Clears conditional-probability denominators from one comparison atom;
/// comparisons without conditional terms pass through unchanged.
FormulaWPtr normalize_conditional(const FormulaWPtr& atom);

/// Applies normalize_conditional to every comparison in the formula.
FormulaWPtr normalize_conditionals(const FormulaWPtr& f);

} // namespace pomc
