#include "pomc/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "pomc/error.hpp"

namespace pomc {

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  p.add_term({}, c);
  return p;
}

Polynomial Polynomial::variable(std::size_t v) {
  Polynomial p;
  p.add_term({{v, 1}}, Rational(1));
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find({});
  return it == terms_.end() ? Rational(0) : it->second;
}

Polynomial Polynomial::without_constant() const {
  Polynomial p = *this;
  p.terms_.erase(Monomial{});
  return p;
}

unsigned Polynomial::degree_in(std::size_t v) const {
  unsigned deg = 0;
  for (const auto& [mono, coef] : terms_) {
    (void)coef;
    for (const auto& [var, exp] : mono)
      if (var == v) deg = std::max(deg, exp);
  }
  return deg;
}

unsigned Polynomial::total_degree() const {
  unsigned deg = 0;
  for (const auto& [mono, coef] : terms_) {
    (void)coef;
    unsigned d = 0;
    for (const auto& [var, exp] : mono) {
      (void)var;
      d += exp;
    }
    deg = std::max(deg, d);
  }
  return deg;
}

std::size_t Polynomial::variable_count() const {
  std::size_t n = 0;
  for (const auto& [mono, coef] : terms_) {
    (void)coef;
    for (const auto& [var, exp] : mono) {
      (void)exp;
      n = std::max(n, var + 1);
    }
  }
  return n;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out = *this;
  for (const auto& [mono, coef] : o.terms_) out.add_term(mono, coef);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial out = *this;
  for (const auto& [mono, coef] : o.terms_) out.add_term(mono, -coef);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out;
  for (const auto& [mono, coef] : terms_) out.add_term(mono, -coef);
  return out;
}

namespace {

Monomial multiply_monomials(const Monomial& a, const Monomial& b) {
  Monomial out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

} // namespace

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial out;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) out.add_term(multiply_monomials(ma, mb), ca * cb);
  return out;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial out = constant(Rational(1));
  for (unsigned i = 0; i < e; ++i) out = out * *this;
  return out;
}

Rational Polynomial::eval(const std::vector<Rational>& values) const {
  Rational out;
  for (const auto& [mono, coef] : terms_) {
    Rational term = coef;
    for (const auto& [var, exp] : mono) {
      if (var >= values.size())
        throw Error(ErrorCode::invalid_argument, "polynomial evaluated with too few values");
      term *= values[var].pow(exp);
    }
    out += term;
  }
  return out;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& image) const {
  Polynomial out;
  for (const auto& [mono, coef] : terms_) {
    Polynomial term = constant(coef);
    for (const auto& [var, exp] : mono) {
      if (var >= image.size())
        throw Error(ErrorCode::invalid_argument, "substitution image too short");
      term = term * image[var].pow(exp);
    }
    out = out + term;
  }
  return out;
}

std::string Polynomial::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [mono, coef] : terms_) {
    Rational c = coef;
    if (first) {
      if (c.sign() < 0) {
        out << "-";
        c = -c;
      }
    } else {
      out << (c.sign() < 0 ? " - " : " + ");
      if (c.sign() < 0) c = -c;
    }
    first = false;
    bool printed_coef = false;
    if (mono.empty() || !c.is_one()) {
      out << c.str();
      printed_coef = true;
    }
    for (std::size_t k = 0; k < mono.size(); ++k) {
      const auto& [var, exp] = mono[k];
      if (printed_coef || k > 0) out << "*";
      if (var >= names.size())
        throw Error(ErrorCode::invalid_argument, "polynomial printed with too few names");
      out << names[var];
      if (exp > 1) out << "^" << exp;
      printed_coef = true;
    }
  }
  return out.str();
}

} // namespace pomc
