#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "conley/graded.hpp"
#include "conley/linalg.hpp"
#include "conley/poset.hpp"

namespace conley {

/// Poset-indexed block map of degree -1 on the direct sum of the C(p).
///
/// Block (q, p) at source degree n is the map C_n(q) -> C_{n-1}(p), stored
/// as a rank C_n(q) x rank C_{n-1}(p) matrix (row convention). Absent blocks
/// are zero.
template <class R>
class BlockMap {
public:
  using ring_type = R;
  using Key = std::pair<std::size_t, std::size_t>;
  using DegreeBlocks = std::map<int, MatrixOver<R>>;

  BlockMap(R ring, Poset poset, std::vector<GradedModule> summands)
      : ring_(std::move(ring)), poset_(std::move(poset)),
        summands_(std::move(summands)) {
    if (summands_.size() != poset_.size())
      throw ShapeMismatch("need one summand per poset element");
    for (const auto& s : summands_) {
      if (!(s.ring() == ring_.spec()))
        throw RingMismatch("summand ring differs from block map ring");
      if (!s.is_free()) throw ShapeMismatch("summands must be free modules");
    }
  }

  const R& ring() const noexcept { return ring_; }
  const Poset& poset() const noexcept { return poset_; }
  const std::vector<GradedModule>& summands() const noexcept { return summands_; }
  const GradedModule& summand(std::size_t p) const { return summands_.at(p); }
  const std::map<Key, DegreeBlocks>& blocks() const noexcept { return blocks_; }

  std::size_t rows_of(std::size_t q, int n) const { return summands_[q].rank(n); }
  std::size_t cols_of(std::size_t p, int n) const { return summands_[p].rank(n - 1); }

  const MatrixOver<R>* find(std::size_t q, std::size_t p, int n) const {
    auto it = blocks_.find({q, p});
    if (it == blocks_.end()) return nullptr;
    auto jt = it->second.find(n);
    return jt == it->second.end() ? nullptr : &jt->second;
  }

  MatrixOver<R> block(std::size_t q, std::size_t p, int n) const {
    if (const auto* m = find(q, p, n)) return *m;
    return zero_matrix(ring_, rows_of(q, n), cols_of(p, n));
  }

  void set_block(std::size_t q, std::size_t p, int n, MatrixOver<R> m) {
    if (q >= poset_.size() || p >= poset_.size())
      throw ShapeMismatch("block index outside the poset");
    if (m.rows() != rows_of(q, n) || m.cols() != cols_of(p, n))
      throw ShapeMismatch("block (" + poset_.name(q) + "," + poset_.name(p) +
                          ") in degree " + std::to_string(n) + " has shape " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected " +
                          std::to_string(rows_of(q, n)) + "x" +
                          std::to_string(cols_of(p, n)));
    blocks_[{q, p}][n] = std::move(m);
  }

  /// Zero-filled slot for in-place updates.
  MatrixOver<R>& slot(std::size_t q, std::size_t p, int n) {
    auto& deg = blocks_[{q, p}];
    auto it = deg.find(n);
    if (it == deg.end())
      it = deg.emplace(n, zero_matrix(ring_, rows_of(q, n), cols_of(p, n))).first;
    return it->second;
  }

  bool is_lower_triangular(bool strict) const {
    for (const auto& [key, deg] : blocks_) {
      const auto [q, p] = key;
      if (poset_.greater(q, p) || (!strict && q == p)) continue;
      for (const auto& [n, m] : deg)
        if (!is_zero(ring_, m)) return false;
    }
    return true;
  }

  /// [min - 1, max + 1] over all degrees carried by the summands.
  std::pair<int, int> degree_window() const {
    std::optional<int> lo, hi;
    for (const auto& s : summands_) {
      if (auto d = s.min_degree()) lo = lo ? std::min(*lo, *d) : *d;
      if (auto d = s.max_degree()) hi = hi ? std::max(*hi, *d) : *d;
    }
    if (!lo) return {0, 0};
    return {*lo - 1, *hi + 1};
  }

  /// Equal as maps: absent and zero blocks are interchangeable.
  friend bool operator==(const BlockMap& a, const BlockMap& b) {
    if (!(a.poset_ == b.poset_) || a.summands_ != b.summands_) return false;
    const auto [lo, hi] = a.degree_window();
    for (std::size_t q = 0; q < a.poset_.size(); ++q)
      for (std::size_t p = 0; p < a.poset_.size(); ++p)
        for (int n = lo; n <= hi; ++n)
          if (!(a.block(q, p, n) == b.block(q, p, n))) return false;
    return true;
  }

private:
  R ring_;
  Poset poset_;
  std::vector<GradedModule> summands_;
  std::map<Key, DegreeBlocks> blocks_;
};

/// C(I) with differential Delta(I); differential(n): C_n -> C_{n-1}.
template <class R>
struct ChainComplex {
  Interval interval;
  int lo = 0, hi = 0;
  std::map<int, std::size_t> ranks;
  std::map<int, MatrixOver<R>> differential;

  std::size_t dim(int n) const {
    auto it = ranks.find(n);
    return it == ranks.end() ? 0 : it->second;
  }
  MatrixOver<R> d(const R& ring, int n) const {
    auto it = differential.find(n);
    if (it != differential.end()) return it->second;
    return zero_matrix(ring, dim(n), dim(n - 1));
  }
};

template <class R>
std::size_t interval_rank(const BlockMap<R>& delta, Interval iv, int n) {
  std::size_t total = 0;
  for (auto p : iv.elements()) total += delta.summand(p).rank(n);
  return total;
}

/// Position of every coordinate of C_n(sub) inside C_n(whole), sub within
/// whole; summands are laid out in element order.
template <class R>
std::vector<std::size_t> coordinate_map(const BlockMap<R>& delta, Interval sub,
                                        Interval whole, int n) {
  std::vector<std::size_t> out;
  out.reserve(interval_rank(delta, sub, n));
  std::size_t offset = 0;
  for (auto p : whole.elements()) {
    const std::size_t r = delta.summand(p).rank(n);
    if (sub.contains(p))
      for (std::size_t i = 0; i < r; ++i) out.push_back(offset + i);
    offset += r;
  }
  return out;
}

/// Canonical injection C_n(sub) -> C_n(whole).
template <class R>
MatrixOver<R> inclusion_matrix(const BlockMap<R>& delta, Interval sub,
                               Interval whole, int n) {
  const auto& ring = delta.ring();
  const auto idx = coordinate_map(delta, sub, whole, n);
  auto m = zero_matrix(ring, idx.size(), interval_rank(delta, whole, n));
  for (std::size_t i = 0; i < idx.size(); ++i) m(i, idx[i]) = ring.one();
  return m;
}

/// Canonical projection C_n(whole) -> C_n(sub).
template <class R>
MatrixOver<R> projection_matrix(const BlockMap<R>& delta, Interval whole,
                                Interval sub, int n) {
  return transpose(inclusion_matrix(delta, sub, whole, n));
}

/// Delta(I): the blocks of Delta with both indices in I, assembled per degree.
template <class R>
ChainComplex<R> restrict(const BlockMap<R>& delta, Interval iv) {
  if (!delta.poset().is_interval(iv))
    throw NotAnInterval(delta.poset().format(iv) + " is not an interval");
  const auto& ring = delta.ring();
  ChainComplex<R> c;
  c.interval = iv;
  std::tie(c.lo, c.hi) = delta.degree_window();
  const auto members = iv.elements();
  for (int n = c.lo; n <= c.hi; ++n) c.ranks[n] = interval_rank(delta, iv, n);
  for (int n = c.lo; n <= c.hi; ++n) {
    auto d = zero_matrix(ring, c.dim(n), c.dim(n - 1));
    std::size_t row = 0;
    for (auto q : members) {
      std::size_t col = 0;
      for (auto p : members) {
        if (const auto* b = delta.find(q, p, n)) d.paste(row, col, *b);
        col += delta.summand(p).rank(n - 1);
      }
      row += delta.summand(q).rank(n);
    }
    c.differential[n] = std::move(d);
  }
  return c;
}

/// Block (q, p) of Delta o Delta from source degree n: sum over r of
/// Delta_{q,r}(n) * Delta_{r,p}(n-1).
template <class R>
MatrixOver<R> square_block(const BlockMap<R>& delta, std::size_t q,
                           std::size_t p, int n) {
  const auto& ring = delta.ring();
  auto acc = zero_matrix(ring, delta.rows_of(q, n), delta.summand(p).rank(n - 2));
  for (std::size_t r = 0; r < delta.poset().size(); ++r) {
    const auto* a = delta.find(q, r, n);
    const auto* b = delta.find(r, p, n - 1);
    if (!a || !b) continue;
    acc = add(ring, acc, multiply(ring, *a, *b));
  }
  return acc;
}

template <class R>
bool check_boundary(const BlockMap<R>& delta) {
  const auto [lo, hi] = delta.degree_window();
  const auto& ring = delta.ring();
  for (std::size_t q = 0; q < delta.poset().size(); ++q)
    for (std::size_t p = 0; p < delta.poset().size(); ++p)
      for (int n = lo; n <= hi; ++n)
        if (!is_zero(ring, square_block(delta, q, p, n))) return false;
  return true;
}

template <class R>
bool is_complex(const R& ring, const ChainComplex<R>& c) {
  for (int n = c.lo + 1; n <= c.hi; ++n)
    if (!is_zero(ring, multiply(ring, c.d(ring, n), c.d(ring, n - 1))))
      return false;
  return true;
}

/// Homology per degree. Over a field by ranks; over the integers from the
/// Smith forms of d_n and d_{n+1}.
template <class R>
GradedModule homology(const R& ring, const ChainComplex<R>& c) {
  if (!is_complex(ring, c)) throw NotAComplex("consecutive differentials do not compose to zero");
  GradedModule h(ring.spec());
  std::map<int, std::size_t> ranks;
  for (int n = c.lo - 1; n <= c.hi + 1; ++n) {
    const auto dn = c.d(ring, n);
    const auto dn1 = c.d(ring, n + 1);
    if constexpr (R::is_field) {
      const std::size_t r = c.dim(n) - rank(ring, dn) - rank(ring, dn1);
      h.set(n, Component{r, {}});
    } else {
      const auto out_snf = smith_normal_form(ring, dn);
      const auto in_snf = smith_normal_form(ring, dn1);
      Component comp;
      comp.free_rank = c.dim(n) - out_snf.rank() - in_snf.rank();
      for (const auto& d : in_snf.invariant_factors)
        if (d > 1) comp.torsion.push_back(d);
      h.set(n, std::move(comp));
    }
  }
  return h;
}

template <class R>
GradedModule homology(const BlockMap<R>& delta, Interval iv) {
  return homology(delta.ring(), restrict(delta, iv));
}

} // namespace conley
