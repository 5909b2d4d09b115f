#pragma once

#include <string>
#include <vector>

#include "pomc/formula.hpp"
#include "pomc/model.hpp"
#include "pomc/polynomial.hpp"

namespace pomc {

/// Polynomial with integer coefficients over named variables; polynomial
/// variable j stands for vars[j].
struct IntPolynomial {
  std::vector<std::string> vars;
  Polynomial poly;
};

/// Syntax `x^2*y - 3*x + 1`: a signed sum of products of declared variables
/// (each with an optional ^exponent) and integer constants.
IntPolynomial parse_int_polynomial(const std::string& text,
                                   const std::vector<std::string>& vars);

/// Fixed four-state chain with Pr(p_exp at t) = (1/2)^t and
/// Pr(p_lin at t) = t*(1/2)^t. The fourth state is an unreachable pad.
PODTMC diophantine_chain();

/// Encodes "p has a root in the naturals" as a mixed-time question on
/// diophantine_chain: with d_i the degree of variable i, each monomial
/// c * prod n_i^{e_i} becomes c times the p_lin mass at t_i to the e_i and
/// the p_exp mass at t_i to the d_i - e_i, so the encoded polynomial equals
/// (1/2)^(d_1 t_1 + ... + d_k t_k) * p(t_1..t_k) at every assignment and has
/// exactly the same roots.
MixedTimeFormula diophantine_to_formula(const IntPolynomial& p);

} // namespace pomc
