#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pomc/rational.hpp"

namespace pomc {

/// Variables with exponents, sorted by variable index, every exponent >= 1.
/// The empty monomial is the constant 1.
using Monomial = std::vector<std::pair<std::size_t, unsigned>>;

/// Multivariate polynomial with Rational coefficients over variables 0,1,2,...
/// Zero coefficients are never stored, so operator== is structural equality.
class Polynomial {
public:
  Polynomial() = default;

  static Polynomial constant(const Rational& c);
  static Polynomial variable(std::size_t v);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  Polynomial without_constant() const;

  unsigned degree_in(std::size_t v) const;
  unsigned total_degree() const;
  std::size_t variable_count() const; // 1 + max referenced variable, 0 if constant

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial pow(unsigned e) const;

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

  Rational eval(const std::vector<Rational>& values) const;

  /// Rebuilds the polynomial with each variable v replaced by image[v].
  Polynomial substitute(const std::vector<Polynomial>& image) const;

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  void add_term(const Monomial& m, const Rational& c);

  /// Rendering with caller-supplied variable names.
  std::string str(const std::vector<std::string>& names) const;

private:
  std::map<Monomial, Rational> terms_;
};

} // namespace pomc
