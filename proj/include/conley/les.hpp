#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conley/block_map.hpp"
#include "conley/linalg.hpp"

namespace conley {

/// Explicit generators of H_n of a chain complex.
///
/// Over a field the generators complete a basis of the boundaries to a basis
/// of the cycles, taking cycle basis vectors greedily in echelon order. Over
/// the integers they come from the Smith form of the boundary lattice inside
/// the cycle lattice; `orders[i]` is the order of generator i (0 = free).
template <class R>
class HomologyBasis {
public:
  using T = typename R::value_type;

  HomologyBasis(const R& ring, const ChainComplex<R>& c, int n) : ring_(ring) {
    const auto d_out = c.d(ring, n);
    const auto d_in = c.d(ring, n + 1);
    const std::size_t dim = c.dim(n);
    if constexpr (R::is_field) {
      const auto cycles = kernel_basis(ring, d_out);
      auto boundaries = row_space_basis(ring, d_in);
      if (boundaries.rows() == 0) boundaries = MatrixOver<R>(0, dim);
      generators_ = MatrixOver<R>(0, dim);
      // reduced rows spanning boundaries plus the generators kept so far,
      // each with a pivot column that is zero in every other row
      std::vector<std::vector<T>> reduced;
      std::vector<std::size_t> pivots;
      auto absorb = [&](std::vector<T> v) {
        for (std::size_t k = 0; k < reduced.size(); ++k) {
          const T c = v[pivots[k]];
          if (ring.is_zero(c)) continue;
          for (std::size_t j = 0; j < dim; ++j)
            v[j] = ring.sub(v[j], ring.mul(c, reduced[k][j]));
        }
        std::size_t p = 0;
        while (p < dim && ring.is_zero(v[p])) ++p;
        if (p == dim) return false;
        const T inv = ring.inv(v[p]);
        for (auto& x : v) x = ring.mul(x, inv);
        for (auto& row : reduced) {
          const T c = row[p];
          if (ring.is_zero(c)) continue;
          for (std::size_t j = 0; j < dim; ++j) row[j] = ring.sub(row[j], ring.mul(c, v[j]));
        }
        reduced.push_back(std::move(v));
        pivots.push_back(p);
        return true;
      };
      for (std::size_t i = 0; i < boundaries.rows(); ++i) absorb(boundaries.row(i));
      for (std::size_t i = 0; i < cycles.rows(); ++i) {
        if (!absorb(cycles.row(i))) continue;
        generators_.append_row(cycles.row(i));
        orders_.push_back(0);
      }
      span_ = stack(generators_, boundaries);
      solver_.emplace(ring, span_);
    } else {
      cycles_ = left_kernel(ring, d_out);
      if (cycles_.rows() == 0) cycles_ = MatrixOver<R>(0, dim);
      MatrixOver<R> bcoords(0, cycles_.rows());
      const LeftSolver<R> in_cycles(ring, cycles_);
      for (std::size_t i = 0; i < d_in.rows(); ++i) {
        auto a = in_cycles.solve(d_in.row(i));
        if (!a) throw NotAComplex("boundary is not a cycle");
        bcoords.append_row(*a);
      }
      if (bcoords.rows() == 0) bcoords = MatrixOver<R>(0, cycles_.rows());
      snf_ = smith_normal_form(ring, bcoords);
      const auto basis = multiply(ring, snf_.V_inv, cycles_);
      generators_ = MatrixOver<R>(0, dim);
      for (std::size_t i = 0; i < basis.rows(); ++i) {
        const T order = i < snf_.rank() ? snf_.invariant_factors[i] : T(0);
        if (order == 1) continue;
        kept_.push_back(i);
        generators_.append_row(basis.row(i));
        orders_.push_back(order);
      }
      solver_.emplace(ring, cycles_);
    }
  }

  std::size_t size() const { return generators_.rows(); }
  const MatrixOver<R>& generators() const { return generators_; }
  const std::vector<Integer>& orders() const { return orders_; }

  /// Class of the cycle z in generator coordinates (torsion coordinates
  /// reduced to [0, order)).
  std::vector<T> coordinates(const std::vector<T>& z) const {
    if constexpr (R::is_field) {
      auto a = solver_->solve(z);
      if (!a) throw NotAComplex("vector is not a cycle");
      a->resize(size());
      return *a;
    } else {
      auto a = solver_->solve(z);
      if (!a) throw NotAComplex("vector is not a cycle");
      const auto y = row_times(ring_, *a, snf_.V);
      std::vector<T> out;
      for (std::size_t k = 0; k < kept_.size(); ++k) {
        T v = y[kept_[k]];
        if (orders_[k] != 0) {
          v %= orders_[k];
          if (v < 0) v += orders_[k];
        }
        out.push_back(v);
      }
      return out;
    }
  }

  /// Image of every generator under a chain-level map, in `target`
  /// coordinates: rows = generators here, columns = generators of target.
  MatrixOver<R> induced(const MatrixOver<R>& chain_map,
                        const HomologyBasis& target) const {
    return induced_by([&](const std::vector<T>& v) { return row_times(ring_, v, chain_map); },
                      target);
  }

  /// As `induced`, with the chain map given as a function on row vectors.
  template <class Apply>
  MatrixOver<R> induced_by(Apply&& apply, const HomologyBasis& target) const {
    MatrixOver<R> out(size(), target.size(), ring_.zero());
    for (std::size_t i = 0; i < size(); ++i) {
      const auto c = target.coordinates(apply(generators_.row(i)));
      for (std::size_t j = 0; j < c.size(); ++j) out(i, j) = c[j];
    }
    return out;
  }

private:
  R ring_;
  MatrixOver<R> generators_;
  std::vector<Integer> orders_;
  MatrixOver<R> span_;   // field: generators then boundary basis
  MatrixOver<R> cycles_; // integers: cycle lattice basis
  SmithForm snf_;
  std::vector<std::size_t> kept_;
  std::optional<LeftSolver<R>> solver_;
};

template <class R>
void require_adjacent(const BlockMap<R>& delta, Interval a, Interval b) {
  if (!delta.poset().is_adjacent({a, b}))
    throw NotAdjacent("(" + delta.poset().format(a) + ", " +
                      delta.poset().format(b) + ") is not adjacent");
}

/// Chain-level connecting map C_n(J) -> C_{n-1}(I): lift into C(IJ), apply
/// Delta(IJ), keep the I coordinates.
template <class R>
MatrixOver<R> connecting_chain_map(const BlockMap<R>& delta, const ChainComplex<R>& c_ij,
                                   Interval I, Interval J, int n) {
  const auto& ring = delta.ring();
  const Interval IJ = I | J;
  const auto lifted = multiply(ring, inclusion_matrix(delta, J, IJ, n), c_ij.d(ring, n));
  return multiply(ring, lifted, projection_matrix(delta, IJ, I, n - 1));
}

template <class R>
MatrixOver<R> connecting_chain_map(const BlockMap<R>& delta, Interval I,
                                   Interval J, int n) {
  return connecting_chain_map(delta, restrict(delta, I | J), I, J, n);
}

/// Snake-lemma map H_n(J) -> H_{n-1}(I) for an adjacent pair (I, J), as a
/// matrix from generators of H_n(J) to generators of H_{n-1}(I).
template <class R>
MatrixOver<R> connecting_homomorphism(const BlockMap<R>& delta, Interval I,
                                      Interval J, int n) {
  require_adjacent(delta, I, J);
  const auto& ring = delta.ring();
  const HomologyBasis<R> hj(ring, restrict(delta, J), n);
  const HomologyBasis<R> hi(ring, restrict(delta, I), n - 1);
  return hj.induced(connecting_chain_map(delta, I, J, n), hi);
}

struct LesTerm {
  Interval interval; // the term is H_degree(interval)
  int degree = 0;
  std::vector<Integer> orders; // one per generator, 0 = free
};

/// ... -> H_n(I) -> H_n(IJ) -> H_n(J) -> H_{n-1}(I) -> ... over the degree
/// window, from the top degree down. maps[k] goes from terms[k] to
/// terms[k + 1].
template <class R>
struct LongExactSequence {
  std::vector<LesTerm> terms;
  std::vector<MatrixOver<R>> maps;
};

/// Restrictions and homology bases of one block map, computed on first use.
/// Checking many pairs of the same map shares this work. The cache refers
/// to `delta`, which must outlive it.
template <class R>
class LesCache {
public:
  explicit LesCache(const BlockMap<R>& delta) : delta_(delta) {}

  const BlockMap<R>& delta() const noexcept { return delta_; }

  const ChainComplex<R>& complex(Interval iv) {
    auto it = complexes_.find(iv.bits());
    if (it == complexes_.end()) it = complexes_.emplace(iv.bits(), restrict(delta_, iv)).first;
    return it->second;
  }

  const HomologyBasis<R>& basis(Interval iv, int n) {
    const auto key = std::pair(iv.bits(), n);
    auto it = bases_.find(key);
    if (it == bases_.end())
      it = bases_.emplace(key, HomologyBasis<R>(delta_.ring(), complex(iv), n)).first;
    return it->second;
  }

private:
  const BlockMap<R>& delta_;
  std::map<std::uint64_t, ChainComplex<R>> complexes_;
  std::map<std::pair<std::uint64_t, int>, HomologyBasis<R>> bases_;
};

template <class R>
LongExactSequence<R> long_exact_sequence(LesCache<R>& cache, Interval I, Interval J) {
  const auto& delta = cache.delta();
  require_adjacent(delta, I, J);
  const Interval IJ = I | J;
  const auto& cIJ = cache.complex(IJ);
  const auto [lo, hi] = delta.degree_window();
  LongExactSequence<R> les;
  les.terms.reserve(3 * static_cast<std::size_t>(hi - lo + 1));
  les.maps.reserve(3 * static_cast<std::size_t>(hi - lo + 1));
  auto term = [&](const HomologyBasis<R>& h, Interval iv, int n) {
    les.terms.push_back({iv, n, h.orders()});
  };
  using T = typename R::value_type;
  const auto& ring = delta.ring();
  // inclusion and projection act on coordinates by position
  auto scatter = [&](const std::vector<T>& v, const std::vector<std::size_t>& at, std::size_t dim) {
    std::vector<T> out(dim, ring.zero());
    for (std::size_t i = 0; i < at.size(); ++i) out[at[i]] = v[i];
    return out;
  };
  auto gather = [&](const std::vector<T>& v, const std::vector<std::size_t>& at) {
    std::vector<T> out(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) out[i] = v[at[i]];
    return out;
  };
  const HomologyBasis<R>* prev_j = nullptr;
  std::vector<std::size_t> prev_j_at;
  for (int n = hi; n >= lo; --n) {
    const auto& hI = cache.basis(I, n);
    const auto& hIJ = cache.basis(IJ, n);
    const auto& hJ = cache.basis(J, n);
    const auto i_at = coordinate_map(delta, I, IJ, n);
    const auto j_at = coordinate_map(delta, J, IJ, n);
    const std::size_t dim_ij = cIJ.dim(n);
    if (prev_j) {
      // lift from C_{n+1}(J), apply Delta(IJ), keep the I coordinates
      const auto d = cIJ.d(ring, n + 1);
      les.maps.push_back(prev_j->induced_by(
          [&](const std::vector<T>& v) {
            return gather(row_times(ring, scatter(v, prev_j_at, d.rows()), d), i_at);
          },
          hI));
    }
    term(hI, I, n);
    les.maps.push_back(hI.induced_by(
        [&](const std::vector<T>& v) { return scatter(v, i_at, dim_ij); }, hIJ));
    term(hIJ, IJ, n);
    les.maps.push_back(
        hIJ.induced_by([&](const std::vector<T>& v) { return gather(v, j_at); }, hJ));
    term(hJ, J, n);
    prev_j = &hJ;
    prev_j_at = j_at;
  }
  return les;
}

template <class R>
LongExactSequence<R> long_exact_sequence(const BlockMap<R>& delta, Interval I,
                                         Interval J) {
  LesCache<R> cache(delta);
  return long_exact_sequence(cache, I, J);
}

/// im(A) = ker(B) in the middle module Z^m / (torsion relations).
template <class R>
bool exact_at(const R& ring, const MatrixOver<R>& a, const MatrixOver<R>& b,
              const std::vector<Integer>& middle, const std::vector<Integer>& right) {
  auto relations = [&](const std::vector<Integer>& orders) {
    MatrixOver<R> d(0, orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (orders[i] == 0) continue;
      std::vector<typename R::value_type> row(orders.size(), ring.zero());
      row[i] = ring.from_integer(orders[i]);
      d.append_row(row);
    }
    if (d.rows() == 0) d = MatrixOver<R>(0, orders.size());
    return d;
  };
  const std::size_t m = middle.size();
  const auto dv = relations(middle);
  const auto image = stack(a, dv);
  const auto kernel_full = left_kernel(ring, stack(b, relations(right)));
  auto kernel = kernel_full.rows() == 0 ? MatrixOver<R>(0, m) : kernel_full.col_block(0, m);
  kernel = stack(kernel, dv);
  return rows_in_span(ring, image, kernel) && rows_in_span(ring, kernel, image);
}

template <class R>
bool is_exact(const R& ring, const LongExactSequence<R>& les) {
  if constexpr (R::is_field) {
    // im A = ker B iff A * B = 0 and rank A + rank B = dim of the middle term
    std::vector<std::size_t> ranks;
    ranks.reserve(les.maps.size());
    for (const auto& m : les.maps) ranks.push_back(rank(ring, m));
    for (std::size_t k = 1; k + 1 < les.terms.size(); ++k)
      if (ranks[k - 1] + ranks[k] != les.terms[k].orders.size() ||
          !is_zero(ring, multiply(ring, les.maps[k - 1], les.maps[k])))
        return false;
    return true;
  }
  for (std::size_t k = 1; k + 1 < les.terms.size(); ++k)
    if (!exact_at(ring, les.maps[k - 1], les.maps[k], les.terms[k].orders,
                  les.terms[k + 1].orders))
      return false;
  return true;
}

/// The homology sequence of 0 -> C(I) -> C(IJ) -> C(J) -> 0 is exact.
template <class R>
bool verify_triangle(LesCache<R>& cache, Interval I, Interval J) {
  return is_exact(cache.delta().ring(), long_exact_sequence(cache, I, J));
}

template <class R>
bool verify_triangle(const BlockMap<R>& delta, Interval I, Interval J) {
  LesCache<R> cache(delta);
  return verify_triangle(cache, I, J);
}

} // namespace conley
