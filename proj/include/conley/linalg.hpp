#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "conley/matrix.hpp"
#include "conley/ring.hpp"

namespace conley {

/// Reduced row echelon form over a field. Pivots are chosen leftmost-first
/// (scanning columns left to right, taking the first row with a nonzero
/// entry) and normalized to one.
template <class R>
struct Echelon {
  MatrixOver<R> reduced;
  std::vector<std::size_t> pivot_cols;

  std::size_t rank() const { return pivot_cols.size(); }
};

template <class R>
Echelon<R> rref(const R& ring, MatrixOver<R> m) {
  static_assert(R::is_field, "rref requires a field");
  Echelon<R> out;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < m.cols() && lead < m.rows(); ++c) {
    std::size_t pivot = lead;
    while (pivot < m.rows() && ring.is_zero(m(pivot, c))) ++pivot;
    if (pivot == m.rows()) continue;
    m.swap_rows(lead, pivot);
    const auto scale = ring.inv(m(lead, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(lead, j) = ring.mul(m(lead, j), scale);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == lead || ring.is_zero(m(i, c))) continue;
      const auto factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        m(i, j) = ring.sub(m(i, j), ring.mul(factor, m(lead, j)));
    }
    out.pivot_cols.push_back(c);
    ++lead;
  }
  out.reduced = std::move(m);
  return out;
}

/// U * M * V = S with U, V unimodular and S diagonal, d_1 | d_2 | ... .
/// `V_inv` is carried along so callers can change coordinates both ways.
struct SmithForm {
  Matrix<Integer> U, S, V, V_inv;
  std::vector<Integer> invariant_factors;

  std::size_t rank() const { return invariant_factors.size(); }
};

/// Classical pivot-and-reduce with a minimal-absolute-value pivot.
inline SmithForm smith_normal_form(const IntegerRing& ring,
                                   const Matrix<Integer>& m) {
  SmithForm f;
  const std::size_t rows = m.rows(), cols = m.cols();
  f.S = m;
  f.U = identity(ring, rows);
  f.V = identity(ring, cols);
  f.V_inv = identity(ring, cols);
  auto& S = f.S;

  auto row_axpy = [&](std::size_t dst, std::size_t src, const Integer& q) {
    // row_dst -= q * row_src
    for (std::size_t j = 0; j < cols; ++j) S(dst, j) -= q * S(src, j);
    for (std::size_t j = 0; j < rows; ++j) f.U(dst, j) -= q * f.U(src, j);
  };
  auto col_axpy = [&](std::size_t dst, std::size_t src, const Integer& q) {
    // col_dst -= q * col_src
    for (std::size_t i = 0; i < rows; ++i) S(i, dst) -= q * S(i, src);
    for (std::size_t i = 0; i < cols; ++i) f.V(i, dst) -= q * f.V(i, src);
    for (std::size_t j = 0; j < cols; ++j) f.V_inv(src, j) += q * f.V_inv(dst, j);
  };
  auto move_to_pivot = [&](std::size_t t, std::size_t i, std::size_t j) {
    S.swap_rows(t, i);
    f.U.swap_rows(t, i);
    S.swap_cols(t, j);
    f.V.swap_cols(t, j);
    f.V_inv.swap_rows(t, j);
  };

  const std::size_t diag = std::min(rows, cols);
  for (std::size_t t = 0; t < diag; ++t) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (S(i, j) != 0 &&
            (!best || abs(S(i, j)) < abs(S(best->first, best->second))))
          best = {i, j};
    if (!best) break;
    move_to_pivot(t, best->first, best->second);

    for (;;) {
      bool cleared = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (S(i, t) == 0) continue;
        row_axpy(i, t, Integer(S(i, t) / S(t, t)));
        if (S(i, t) != 0) cleared = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (S(t, j) == 0) continue;
        col_axpy(j, t, Integer(S(t, j) / S(t, t)));
        if (S(t, j) != 0) cleared = false;
      }
      if (!cleared) {
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < rows; ++i)
          if (S(i, t) != 0 && abs(S(i, t)) < abs(S(bi, bj))) bi = i, bj = t;
        for (std::size_t j = t + 1; j < cols; ++j)
          if (S(t, j) != 0 && abs(S(t, j)) < abs(S(bi, bj))) bi = t, bj = j;
        move_to_pivot(t, bi, bj);
        continue;
      }
      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < rows && !offender; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (S(i, j) % S(t, t) != 0) {
            offender = i;
            break;
          }
      if (!offender) break;
      row_axpy(t, *offender, Integer(-1));
    }
    if (S(t, t) < 0) {
      for (std::size_t j = 0; j < cols; ++j) S(t, j) = -S(t, j);
      for (std::size_t j = 0; j < rows; ++j) f.U(t, j) = -f.U(t, j);
    }
    f.invariant_factors.push_back(S(t, t));
  }
  return f;
}

/// Rank over the fraction field of the ring.
template <class R>
std::size_t rank(const R& ring, const MatrixOver<R>& m) {
  if constexpr (R::is_field) {
    return rref(ring, m).rank();
  } else {
    return smith_normal_form(ring, m).rank();
  }
}

/// Basis of the left kernel {x : x * M = 0} over a field, one vector per row.
/// Vectors come from the free columns of rref(M^T) in increasing order, each
/// scaled so its first nonzero entry is one.
template <class R>
MatrixOver<R> kernel_basis(const R& ring, const MatrixOver<R>& m) {
  if constexpr (!R::is_field) {
    throw NotAField("kernel_basis requires a field; use smith_normal_form");
  } else {
    const auto ech = rref(ring, transpose(m));
    const std::size_t n = m.rows();
    MatrixOver<R> out(0, n);
    std::vector<bool> is_pivot(n, false);
    for (auto c : ech.pivot_cols) is_pivot[c] = true;
    for (std::size_t free = 0; free < n; ++free) {
      if (is_pivot[free]) continue;
      std::vector<typename R::value_type> v(n, ring.zero());
      v[free] = ring.one();
      for (std::size_t i = 0; i < ech.pivot_cols.size(); ++i)
        v[ech.pivot_cols[i]] = ring.neg(ech.reduced(i, free));
      for (const auto& x : v)
        if (!ring.is_zero(x)) {
          const auto s = ring.inv(x);
          for (auto& y : v) y = ring.mul(y, s);
          break;
        }
      out.append_row(v);
    }
    return out;
  }
}

/// Left kernel over a field or the integers. Over the integers the rows are
/// a basis of the (saturated) kernel lattice.
template <class R>
MatrixOver<R> left_kernel(const R& ring, const MatrixOver<R>& m) {
  if constexpr (R::is_field) {
    return kernel_basis(ring, m);
  } else {
    const auto f = smith_normal_form(ring, m);
    return f.U.row_block(f.rank(), m.rows() - f.rank());
  }
}

/// Nonzero rows of the reduced echelon form (fields only).
template <class R>
MatrixOver<R> row_space_basis(const R& ring, const MatrixOver<R>& m) {
  auto ech = rref(ring, m);
  return ech.reduced.row_block(0, ech.rank());
}

/// Solves a * A = b for many right-hand sides against one fixed A.
///
/// Over a field A is brought to reduced echelon form E = T * A once; a
/// solution is then read off the pivot columns of b. Over the integers the
/// Smith form D = U * A * V is computed once.
template <class R>
class LeftSolver {
public:
  using T = typename R::value_type;

  LeftSolver(const R& ring, const MatrixOver<R>& a) : ring_(ring), rows_(a.rows()), cols_(a.cols()) {
    if constexpr (R::is_field) {
      auto ech = rref(ring, hstack(a, identity(ring, rows_)));
      for (auto c : ech.pivot_cols)
        if (c < cols_) pivots_.push_back(c);
      const auto top = ech.reduced.row_block(0, pivots_.size());
      echelon_ = top.col_block(0, cols_);
      transform_ = top.col_block(cols_, rows_);
    } else {
      snf_ = smith_normal_form(ring, a);
    }
  }

  /// Some a with a * A = b, or nullopt if b is outside the row span (row
  /// lattice over the integers).
  std::optional<std::vector<T>> solve(const std::vector<T>& b) const {
    if (b.size() != cols_) throw DimensionMismatch("right-hand side length does not match columns");
    if constexpr (R::is_field) {
      std::vector<T> y(pivots_.size());
      for (std::size_t i = 0; i < pivots_.size(); ++i) y[i] = b[pivots_[i]];
      if (row_times(ring_, y, echelon_) != b) return std::nullopt;
      return row_times(ring_, y, transform_);
    } else {
      const auto w = row_times(ring_, b, snf_.V);
      std::vector<T> c(rows_, ring_.zero());
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (i < snf_.rank()) {
          if (w[i] % snf_.invariant_factors[i] != 0) return std::nullopt;
          c[i] = w[i] / snf_.invariant_factors[i];
        } else if (w[i] != 0) {
          return std::nullopt;
        }
      }
      return row_times(ring_, c, snf_.U);
    }
  }

private:
  R ring_;
  std::size_t rows_, cols_;
  std::vector<std::size_t> pivots_;
  MatrixOver<R> echelon_, transform_;
  SmithForm snf_;
};

/// Some a with a * A = b, or nullopt if b is outside the row span (row
/// lattice over the integers).
template <class R>
std::optional<std::vector<typename R::value_type>>
solve_left(const R& ring, const MatrixOver<R>& a,
           const std::vector<typename R::value_type>& b) {
  return LeftSolver<R>(ring, a).solve(b);
}

/// Inverse over a field, or nullopt when singular.
template <class R>
std::optional<MatrixOver<R>> inverse(const R& ring, const MatrixOver<R>& m) {
  static_assert(R::is_field, "inverse requires a field");
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const auto ech = rref(ring, hstack(m, identity(ring, n)));
  if (ech.rank() < n || (n > 0 && ech.pivot_cols[n - 1] >= n)) return std::nullopt;
  return ech.reduced.col_block(n, n);
}

/// Every row of `sub` lies in the row span (lattice) of `span`.
template <class R>
bool rows_in_span(const R& ring, const MatrixOver<R>& sub,
                  const MatrixOver<R>& span) {
  if (sub.rows() == 0) return true;
  const LeftSolver<R> solver(ring, span);
  for (std::size_t i = 0; i < sub.rows(); ++i)
    if (!solver.solve(sub.row(i))) return false;
  return true;
}

} // namespace conley
