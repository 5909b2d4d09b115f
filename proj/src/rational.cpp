#include "pomc/rational.hpp"

#include <cctype>
#include <ostream>

#include "pomc/error.hpp"

namespace pomc {

Rational::Rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::invalid_argument, "rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error(ErrorCode::invalid_argument, "rational with zero denominator");
  v_ = mpq_class(num) / mpq_class(den);
  v_.canonicalize();
}

Rational Rational::from_string(const std::string& text) {
  auto fail = [&]() -> Rational {
    throw Error(ErrorCode::parse_error, "malformed rational literal '" + text + "'");
  };
  if (text.empty()) return fail();
  std::size_t i = 0;
  if (text[i] == '-' || text[i] == '+') ++i;
  std::size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    ++i;
    ++digits;
  }
  if (digits == 0) return fail();
  if (i == text.size()) {
    mpq_class v(text);
    v.canonicalize();
    return Rational(v);
  }
  if (text[i] != '/') return fail();
  ++i;
  std::size_t den_digits = 0;
  std::size_t den_start = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    ++i;
    ++den_digits;
  }
  if (den_digits == 0 || i != text.size()) return fail();
  if (mpz_class(text.substr(den_start)) == 0) {
    throw Error(ErrorCode::invalid_argument, "rational with zero denominator");
  }
  mpq_class v(text);
  v.canonicalize();
  return Rational(v);
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(v_))); }

Rational Rational::reciprocal() const {
  if (is_zero()) throw Error(ErrorCode::invalid_argument, "reciprocal of zero");
  return Rational(mpq_class(1) / v_);
}

Rational Rational::pow(unsigned long e) const {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), v_.get_num().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), v_.get_den().get_mpz_t(), e);
  return Rational(num, den);
}

Rational Rational::operator-() const { return Rational(mpq_class(-v_)); }

Rational& Rational::operator+=(const Rational& o) {
  v_ += o.v_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  v_ -= o.v_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  v_ *= o.v_;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorCode::invalid_argument, "division by zero");
  v_ /= o.v_;
  return *this;
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational rational_from_ulong(std::uint64_t n) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
  return Rational(z, mpz_class(1));
}

} // namespace pomc
