#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pomc/matrix.hpp"
#include "pomc/rational.hpp"
#include "pomc/verdict.hpp"

namespace pomc {

/// Linear recurrence u_n = coeffs[0]*u_{n-1} + ... + coeffs[k-1]*u_{n-k},
/// seeded by init = u_0..u_{k-1}. The trailing coefficient must be nonzero.
struct LRS {
  std::vector<Rational> coeffs;
  std::vector<Rational> init;

  std::size_t order() const { return coeffs.size(); }
};

/// Empty result means the recurrence is well formed.
std::vector<std::string> validate_lrs(const LRS& l);

/// Text form `order=2 coeffs=1,1 init=0,1`.
LRS parse_lrs(const std::string& text);

Rational lrs_eval(const LRS& l, unsigned long n);

/// Square matrix whose n-th power carries u_n in its top-right entry for
/// n >= 1. Stays k x k when the initial values line up with the impulse
/// response; otherwise they are folded into a border row, giving k+1.
RationalMatrix lrs_to_companion(const LRS& l);

/// u_n = v^T a^n w for n >= 1, with v and w unit coordinate vectors.
struct BilinearForm {
  std::vector<Rational> v;
  RationalMatrix a;
  std::vector<Rational> w;
};

BilinearForm lrs_to_bilinear(const LRS& l);

/// Top-right readout of an integer matrix rebuilt over a stochastic one: for
/// every n >= 1 the original (a^n) top-right entry is zero (positive) exactly
/// when v^T b^n w equals (exceeds) c.
struct StochasticEmbedding {
  RationalMatrix b;
  std::vector<Rational> v; // a distribution
  std::vector<Rational> w; // 0/1, last coordinate only
  Rational c;
  Rational scale;

  /// The original top-right entry of a^n, from an observed v^T b^n w.
  Rational recover(const Rational& value, unsigned long n) const;
};

StochasticEmbedding stochastic_embedding(const RationalMatrix& a);

enum class SkolemMode { zero, positivity, ultimate_positivity };

/// Scans u_start..u_limit. zero: first zero term as a witness. positivity:
/// first negative term as a failing counterexample. ultimate_positivity: the
/// last negative term seen, as a witness. NoWitnessUpTo(limit) when the scan
/// finds nothing of the kind.
Verdict skolem_search(const LRS& l, SkolemMode mode, unsigned long limit, unsigned long start = 0);

} // namespace pomc
