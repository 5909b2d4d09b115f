#include "pomc/matrix.hpp"

#include <utility>

#include "pomc/error.hpp"

namespace pomc {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorCode::dimension_mismatch, "matrix product shapes");
  RationalMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& aik = at(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        if (o.at(k, j).is_zero()) continue;
        out.at(i, j) += aik * o.at(k, j);
      }
    }
  }
  return out;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(ErrorCode::dimension_mismatch, "matrix sum shapes");
  RationalMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + o.a_[i];
  return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(ErrorCode::dimension_mismatch, "matrix difference shapes");
  RationalMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - o.a_[i];
  return out;
}

RationalMatrix RationalMatrix::scaled(const Rational& c) const {
  RationalMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] * c;
  return out;
}

RationalMatrix RationalMatrix::transposed() const {
  RationalMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

bool RationalMatrix::is_stochastic() const {
  if (!is_square() || rows_ == 0) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    Rational sum;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (at(i, j).sign() < 0) return false;
      sum += at(i, j);
    }
    if (!sum.is_one()) return false;
  }
  return true;
}

std::optional<RationalMatrix> RationalMatrix::inverse() const {
  if (!is_square()) throw Error(ErrorCode::dimension_mismatch, "inverse of non-square matrix");
  const std::size_t n = rows_;
  RationalMatrix a = *this;
  RationalMatrix inv = identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a.at(pivot, col).is_zero()) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a.at(pivot, j), a.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    Rational scale = a.at(col, col).reciprocal();
    for (std::size_t j = 0; j < n; ++j) {
      a.at(col, j) *= scale;
      inv.at(col, j) *= scale;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a.at(i, col).is_zero()) continue;
      Rational factor = a.at(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a.at(i, j) -= factor * a.at(col, j);
        inv.at(i, j) -= factor * inv.at(col, j);
      }
    }
  }
  return inv;
}

RationalMatrix matrix_power(const RationalMatrix& m, unsigned long n) {
  if (!m.is_square()) throw Error(ErrorCode::dimension_mismatch, "power of non-square matrix");
  RationalMatrix result = RationalMatrix::identity(m.rows());
  RationalMatrix base = m;
  while (n > 0) {
    if (n & 1UL) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

std::vector<Rational> row_times_matrix(const std::vector<Rational>& v, const RationalMatrix& m) {
  if (v.size() != m.rows()) throw Error(ErrorCode::dimension_mismatch, "row-vector product shapes");
  std::vector<Rational> out(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i].is_zero()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m.at(i, j).is_zero()) continue;
      out[j] += v[i] * m.at(i, j);
    }
  }
  return out;
}

std::vector<Rational> matrix_times_col(const RationalMatrix& m, const std::vector<Rational>& v) {
  if (v.size() != m.cols()) throw Error(ErrorCode::dimension_mismatch, "col-vector product shapes");
  std::vector<Rational> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m.at(i, j).is_zero() && !v[j].is_zero()) out[i] += m.at(i, j) * v[j];
    }
  return out;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, "dot product shapes");
  Rational out;
  for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
  return out;
}

Rational bilinear_power(const std::vector<Rational>& v, const RationalMatrix& m, unsigned long n,
                        const std::vector<Rational>& w) {
  std::vector<Rational> cur = v;
  for (unsigned long i = 0; i < n; ++i) cur = row_times_matrix(cur, m);
  return dot(cur, w);
}

PowerWalker::PowerWalker(std::vector<Rational> v, const RationalMatrix& m)
    : m_(m), cur_(std::move(v)) {
  if (cur_.size() != m_.rows() || !m_.is_square())
    throw Error(ErrorCode::dimension_mismatch, "power walker shapes");
}

void PowerWalker::step() {
  cur_ = row_times_matrix(cur_, m_);
  ++steps_;
}

} // namespace pomc
