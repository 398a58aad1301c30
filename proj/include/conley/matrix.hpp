#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "conley/error.hpp"

namespace conley {

/// Dense row-major matrix. Arithmetic lives in free functions taking the ring
/// policy, so entries are only ever combined through ring operations.
///
/// Maps act from the right: an m x n matrix sends a row vector of length m to
/// one of length n via x -> x * M.
template <class T>
class Matrix {
public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionMismatch("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::vector<T> row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }
  void set_row(std::size_t r, const std::vector<T>& values) {
    if (values.size() != cols_) throw DimensionMismatch("row length mismatch");
    for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = values[c];
  }
  void append_row(const std::vector<T>& values) {
    if (rows_ == 0 && data_.empty()) cols_ = values.size();
    if (values.size() != cols_) throw DimensionMismatch("row length mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c)
      std::swap((*this)(a, c), (*this)(b, c));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r)
      std::swap((*this)(r, a), (*this)(r, b));
  }

  /// Rows [first, first + count) as a new matrix.
  Matrix row_block(std::size_t first, std::size_t count) const {
    Matrix out(count, cols_);
    for (std::size_t r = 0; r < count; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(first + r, c);
    return out;
  }
  Matrix col_block(std::size_t first, std::size_t count) const {
    Matrix out(rows_, count);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
    return out;
  }
  void paste(std::size_t row0, std::size_t col0, const Matrix& block) {
    for (std::size_t r = 0; r < block.rows(); ++r)
      for (std::size_t c = 0; c < block.cols(); ++c)
        (*this)(row0 + r, col0 + c) = block(r, c);
  }

  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class R>
using MatrixOver = Matrix<typename R::value_type>;

template <class R>
MatrixOver<R> zero_matrix(const R& ring, std::size_t rows, std::size_t cols) {
  return MatrixOver<R>(rows, cols, ring.zero());
}

template <class R>
MatrixOver<R> identity(const R& ring, std::size_t n) {
  MatrixOver<R> out(n, n, ring.zero());
  for (std::size_t i = 0; i < n; ++i) out(i, i) = ring.one();
  return out;
}

template <class R>
bool is_zero(const R& ring, const MatrixOver<R>& m) {
  for (const auto& v : m.data())
    if (!ring.is_zero(v)) return false;
  return true;
}

template <class R>
MatrixOver<R> multiply(const R& ring, const MatrixOver<R>& a,
                       const MatrixOver<R>& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("cannot multiply " + std::to_string(a.rows()) +
                            "x" + std::to_string(a.cols()) + " by " +
                            std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  MatrixOver<R> out(a.rows(), b.cols(), ring.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto& aik = a(i, k);
      if (ring.is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        out(i, j) = ring.add(out(i, j), ring.mul(aik, b(k, j)));
    }
  return out;
}

template <class R>
MatrixOver<R> add(const R& ring, const MatrixOver<R>& a,
                  const MatrixOver<R>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("cannot add matrices of different shapes");
  MatrixOver<R> out(a.rows(), a.cols(), ring.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out(i, j) = ring.add(a(i, j), b(i, j));
  return out;
}

template <class R>
MatrixOver<R> negate(const R& ring, const MatrixOver<R>& a) {
  MatrixOver<R> out(a.rows(), a.cols(), ring.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = ring.neg(a(i, j));
  return out;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

/// Vertical concatenation: rows of `top` followed by rows of `bottom`.
template <class T>
Matrix<T> stack(const Matrix<T>& top, const Matrix<T>& bottom) {
  if (top.cols() != bottom.cols())
    throw DimensionMismatch("cannot stack matrices with different widths");
  Matrix<T> out(top.rows() + bottom.rows(), top.cols());
  out.paste(0, 0, top);
  out.paste(top.rows(), 0, bottom);
  return out;
}

/// Horizontal concatenation.
template <class T>
Matrix<T> hstack(const Matrix<T>& left, const Matrix<T>& right) {
  if (left.rows() != right.rows())
    throw DimensionMismatch("cannot join matrices with different heights");
  Matrix<T> out(left.rows(), left.cols() + right.cols());
  out.paste(0, 0, left);
  out.paste(0, left.cols(), right);
  return out;
}

template <class R>
std::vector<typename R::value_type>
row_times(const R& ring, const std::vector<typename R::value_type>& x,
          const MatrixOver<R>& m) {
  if (x.size() != m.rows())
    throw DimensionMismatch("vector length does not match matrix rows");
  std::vector<typename R::value_type> out(m.cols(), ring.zero());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (ring.is_zero(x[i])) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      out[j] = ring.add(out[j], ring.mul(x[i], m(i, j)));
  }
  return out;
}

} // namespace conley
