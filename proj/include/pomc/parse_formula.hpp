#pragma once

#include <string>

#include "pomc/formula.hpp"

namespace pomc {

/// Branching-logic concrete syntax, e.g. "A G (Pr[i](F p) >= 1/2) & K[i] X q".
/// Sugar: false, |, or, ->, implies, E, F, G, F<=k, G<=k, U<=k.
FormulaKPtr parse_ctlkp(const std::string& text);

struct WmloParseOptions {
  bool allow_free_time = false;
};

/// First-order concrete syntax, e.g.
///   "exists t u . t < u & P(p@t & q@u) = 1/2"
///   "K[i]@t p@t", "Pr[i]@0(p@0) >= 1/3", "P(p@t | q@0) < 1".
/// Inside P(...) a bare '|' separates the conditional; use "or" for
/// disjunction there. Set variables come from "forallset X . ... X@t ...".
FormulaWPtr parse_wmlo(const std::string& text, const WmloParseOptions& opts = {});

/// parse_wmlo plus the mixed-time shape check.
MixedTimeFormula parse_mixed_time(const std::string& text);

} // namespace pomc
