#pragma once

#include <string>

#include "pomc/formula.hpp"
#include "pomc/model.hpp"
#include "pomc/run_mode.hpp"
#include "pomc/verdict.hpp"

namespace pomc {

/// Searches assignments in [0, T]^n for one satisfying the comparison, with
/// every mass taken from the exact transient distribution. Returns the
/// lexicographically least witness (named after f.vars) or NoWitnessUpTo(T).
/// The parallel mode splits the grid across threads and still reports the
/// least witness.
Verdict check_mixed_time(const PODTMC& m, const MixedTimeFormula& f, unsigned long T,
                         RunMode mode = RunMode::serial);

/// Semidecision of "at some time t, the mass of prop satisfies rel c".
/// Scans t = 0..T over exact marginals and reports the first hit as
/// Witness(t=...), else NoWitnessUpTo(T). With c = 0 no bound is needed:
/// the answer follows from the support sequence of the chain (reachability
/// for >, a support avoiding prop for = and <=), so the result is Holds or
/// Fails and T is ignored.
Verdict check_skolem_form(const PODTMC& m, const std::string& prop, Rel rel, const Rational& c,
                          unsigned long T, RunMode mode = RunMode::serial);

} // namespace pomc
