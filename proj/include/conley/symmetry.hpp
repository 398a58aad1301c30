#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "conley/block_map.hpp"
#include "conley/graded.hpp"
#include "conley/linalg.hpp"
#include "conley/poset.hpp"

namespace conley {

/// One group element: a permutation of the poset and, for every p, the
/// degree-0 isomorphism psi: C(p) -> C(perm[p]) given per degree.
template <class R>
struct GroupElement {
  std::vector<std::size_t> perm;
  std::vector<std::map<int, MatrixOver<R>>> psi;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// Finite group acting on the poset and on the summands C(p). Elements act
/// from the right, so the product a * b applies a first, then b:
///   (a*b).perm[p] = b.perm[a.perm[p]],  psi_{a*b} = psi_a * psi_b.
template <class R>
class GroupAction {
public:
  static constexpr std::size_t max_order = 5040;

  /// Closes the generators under multiplication and validates the result.
  static GroupAction generate(const R& ring, const Poset& poset,
                              const std::vector<GradedModule>& summands,
                              std::vector<GroupElement<R>> generators) {
    GroupAction g;
    g.ring_ = ring;
    g.summands_ = summands;
    for (auto& gen : generators) {
      fill_missing(ring, summands, gen);
      g.check_element(poset, gen);
    }
    g.elements_.push_back(g.identity_element());
    for (std::size_t i = 0; i < g.elements_.size(); ++i) {
      for (const auto& gen : generators) {
        auto prod = g.multiply(g.elements_[i], gen);
        if (g.find(prod) == npos) {
          if (g.elements_.size() >= max_order)
            throw InvalidAction("group generated by the action exceeds " +
                                std::to_string(max_order) + " elements");
          g.elements_.push_back(std::move(prod));
        }
      }
    }
    for (const auto& gen : generators) g.generators_.push_back(g.find(gen));
    // multiplication table; also confirms closure and psi(ab) = psi(a)psi(b)
    const std::size_t n = g.elements_.size();
    g.table_.assign(n, std::vector<std::size_t>(n, npos));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const auto idx = g.find(g.multiply(g.elements_[a], g.elements_[b]));
        if (idx == npos) throw InvalidAction("action is not closed under products");
        g.table_[a][b] = idx;
      }
    return g;
  }

  const std::vector<GroupElement<R>>& elements() const noexcept { return elements_; }
  const std::vector<std::size_t>& generators() const noexcept { return generators_; }
  const std::vector<std::vector<std::size_t>>& table() const noexcept { return table_; }
  std::size_t order() const noexcept { return elements_.size(); }

  /// psi(sigma) on C_n(p), as a rank C_n(p) x rank C_n(sigma p) matrix.
  MatrixOver<R> psi(std::size_t element, std::size_t p, int n) const {
    const auto& e = elements_.at(element);
    auto it = e.psi[p].find(n);
    if (it != e.psi[p].end()) return it->second;
    return zero_matrix(ring_, summands_[p].rank(n), summands_[e.perm[p]].rank(n));
  }

  GroupElement<R> multiply(const GroupElement<R>& a, const GroupElement<R>& b) const {
    GroupElement<R> out;
    const std::size_t n = a.perm.size();
    out.perm.resize(n);
    out.psi.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
      out.perm[p] = b.perm[a.perm[p]];
      for (const auto& [deg, m] : a.psi[p])
        out.psi[p][deg] = conley::multiply(ring_, m, b.psi[a.perm[p]].at(deg));
    }
    return out;
  }

private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  static void fill_missing(const R& ring, const std::vector<GradedModule>& summands,
                           GroupElement<R>& e) {
    e.psi.resize(summands.size());
    for (std::size_t p = 0; p < summands.size(); ++p)
      for (const auto& [deg, c] : summands[p].components())
        if (!e.psi[p].count(deg) && p < e.perm.size() &&
            e.perm[p] < summands.size() &&
            summands[e.perm[p]].rank(deg) == c.free_rank)
          e.psi[p][deg] = identity(ring, c.free_rank);
  }

  GroupElement<R> identity_element() const {
    GroupElement<R> e;
    for (std::size_t p = 0; p < summands_.size(); ++p) e.perm.push_back(p);
    e.psi.resize(summands_.size());
    for (std::size_t p = 0; p < summands_.size(); ++p)
      for (const auto& [deg, c] : summands_[p].components())
        e.psi[p][deg] = identity(ring_, c.free_rank);
    return e;
  }

  void check_element(const Poset& poset, const GroupElement<R>& e) const {
    const std::size_t n = poset.size();
    if (e.perm.size() != n) throw InvalidAction("permutation must cover every element");
    std::vector<bool> hit(n, false);
    for (auto image : e.perm) {
      if (image >= n || hit[image]) throw InvalidAction("map on elements is not a permutation");
      hit[image] = true;
    }
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p = 0; p < n; ++p)
        if (poset.greater(q, p) && !poset.greater(e.perm[q], e.perm[p]))
          throw InvalidAction("permutation does not preserve " + poset.name(q) +
                              " > " + poset.name(p));
    for (std::size_t p = 0; p < n; ++p) {
      const auto& src = summands_[p];
      const auto& dst = summands_[e.perm[p]];
      if (src.components() != dst.components())
        throw InvalidAction("C(" + poset.name(p) + ") and C(" +
                            poset.name(e.perm[p]) +
                            ") differ, so no isomorphism can map one to the other");
      for (const auto& [deg, m] : e.psi[p]) {
        const std::size_t r = src.rank(deg);
        if (m.rows() != r || m.cols() != r)
          throw InvalidAction("map C_" + std::to_string(deg) + "(" + poset.name(p) +
                              ") has the wrong shape");
        if (rank(ring_, m) != r)
          throw InvalidAction("map C_" + std::to_string(deg) + "(" + poset.name(p) +
                              ") is not invertible");
      }
      for (const auto& [deg, c] : src.components())
        if (!e.psi[p].count(deg))
          throw InvalidAction("missing map on C_" + std::to_string(deg) + "(" +
                              poset.name(p) + ")");
    }
  }

  std::size_t find(const GroupElement<R>& e) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (elements_[i] == e) return i;
    return npos;
  }

  R ring_{default_ring()};
  std::vector<GradedModule> summands_;
  std::vector<GroupElement<R>> elements_;
  std::vector<std::size_t> generators_;
  std::vector<std::vector<std::size_t>> table_;

  static R default_ring() {
    if constexpr (std::is_same_v<R, PrimeField>) return PrimeField(2);
    else return R{};
  }
};

/// Delta_{q,p} psi(sigma) = psi(sigma) Delta_{sigma q, sigma p} for every
/// generator sigma and every block, diagonal included.
template <class R>
bool is_symmetric(const BlockMap<R>& delta, const GroupAction<R>& action) {
  const auto& ring = delta.ring();
  const auto [lo, hi] = delta.degree_window();
  const std::size_t n = delta.poset().size();
  for (auto g : action.generators()) {
    const auto& perm = action.elements()[g].perm;
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p = 0; p < n; ++p)
        for (int d = lo; d <= hi; ++d) {
          const auto lhs = multiply(ring, delta.block(q, p, d), action.psi(g, p, d - 1));
          const auto rhs = multiply(ring, action.psi(g, q, d), delta.block(perm[q], perm[p], d));
          if (!(lhs == rhs)) return false;
        }
  }
  return true;
}

} // namespace conley
