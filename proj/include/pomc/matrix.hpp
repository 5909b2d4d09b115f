#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pomc/rational.hpp"

namespace pomc {

/// Dense matrix over Rational. Row-major; all arithmetic is exact.
class RationalMatrix {
public:
  RationalMatrix() : rows_(0), cols_(0) {}
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix operator+(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  RationalMatrix scaled(const Rational& c) const;
  RationalMatrix transposed() const;

  bool operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  // Nonnegative entries and every row summing to exactly 1.
  bool is_stochastic() const;
  bool is_square() const { return rows_ == cols_; }

  std::optional<RationalMatrix> inverse() const;

private:
  std::size_t rows_, cols_;
  std::vector<Rational> a_;
};

RationalMatrix matrix_power(const RationalMatrix& m, unsigned long n);

std::vector<Rational> row_times_matrix(const std::vector<Rational>& v, const RationalMatrix& m);
std::vector<Rational> matrix_times_col(const RationalMatrix& m, const std::vector<Rational>& v);
Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b);

/// v^T M^n w without materializing M^n on repeated calls for successive n; see PowerWalker.
Rational bilinear_power(const std::vector<Rational>& v, const RationalMatrix& m, unsigned long n,
                        const std::vector<Rational>& w);

/// Iterates v^T, v^T M, v^T M^2, ... one step at a time.
class PowerWalker {
public:
  PowerWalker(std::vector<Rational> v, const RationalMatrix& m);
  const std::vector<Rational>& current() const { return cur_; }
  unsigned long step_count() const { return steps_; }
  void step();

private:
  const RationalMatrix& m_;
  std::vector<Rational> cur_;
  unsigned long steps_ = 0;
};

} // namespace pomc
