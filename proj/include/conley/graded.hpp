#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <type_traits>
#include <string>
#include <vector>

#include "conley/linalg.hpp"
#include "conley/matrix.hpp"
#include "conley/ring.hpp"

namespace conley {

/// One degree of a finitely generated module over a PID: Z^r + sum Z/d_i.
struct Component {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion; // invariant factors > 1, d_1 | d_2 | ...

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  friend bool operator==(const Component&, const Component&) = default;
};

/// Graded module described up to isomorphism. Zero components are never
/// stored, so equality of component maps is isomorphism.
class GradedModule {
public:
  GradedModule() = default;
  explicit GradedModule(RingSpec ring) : ring_(ring) {}

  const RingSpec& ring() const noexcept { return ring_; }
  const std::map<int, Component>& components() const noexcept { return comps_; }

  bool is_zero() const { return comps_.empty(); }
  bool is_free() const {
    for (const auto& [n, c] : comps_)
      if (!c.torsion.empty()) return false;
    return true;
  }

  std::size_t rank(int degree) const {
    auto it = comps_.find(degree);
    return it == comps_.end() ? 0 : it->second.free_rank;
  }
  const Component& component(int degree) const {
    static const Component zero;
    auto it = comps_.find(degree);
    return it == comps_.end() ? zero : it->second;
  }

  void set(int degree, Component c) {
    if (!ring_.is_field() && !c.torsion.empty()) {
      for (std::size_t i = 0; i < c.torsion.size(); ++i) {
        if (c.torsion[i] <= 1)
          throw InvalidInstance("torsion factors must exceed 1");
        if (i > 0 && c.torsion[i] % c.torsion[i - 1] != 0)
          throw InvalidInstance("torsion factors must form a divisibility chain");
      }
    } else {
      c.torsion.clear();
    }
    if (c.is_zero())
      comps_.erase(degree);
    else
      comps_[degree] = std::move(c);
  }

  std::optional<int> min_degree() const {
    if (comps_.empty()) return std::nullopt;
    return comps_.begin()->first;
  }
  std::optional<int> max_degree() const {
    if (comps_.empty()) return std::nullopt;
    return comps_.rbegin()->first;
  }

  /// Alternating sum of free ranks.
  long euler_characteristic() const {
    long chi = 0;
    for (const auto& [n, c] : comps_)
      chi += (n % 2 == 0 ? 1 : -1) * static_cast<long>(c.free_rank);
    return chi;
  }

  /// "{0: 1, 1: 2}" for free modules; torsion appears as "0 + Z/2".
  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [n, c] : comps_) {
      if (!first) out += ", ";
      first = false;
      // torsion-only components print as "Z/2 + Z/4", mixed ones as "1 + Z/2"
      std::string term = c.free_rank || c.torsion.empty() ? std::to_string(c.free_rank) : "";
      for (const auto& d : c.torsion) term += (term.empty() ? "Z/" : " + Z/") + d.str();
      out += std::to_string(n) + ": " + term;
    }
    return out + "}";
  }

  friend bool operator==(const GradedModule&, const GradedModule&) = default;

private:
  RingSpec ring_{};
  std::map<int, Component> comps_;
};

inline GradedModule graded_from_ranks(RingSpec ring,
                                      const std::map<int, std::size_t>& ranks) {
  GradedModule m(ring);
  for (const auto& [n, r] : ranks) m.set(n, Component{r, {}});
  return m;
}

/// Rank one, concentrated in degree `index`.
inline GradedModule graded_from_index(RingSpec ring, int index) {
  return graded_from_ranks(ring, {{index, 1}});
}

/// One degree given by generators and a relation matrix (rows = relations).
struct Presentation {
  std::size_t generators = 0;
  Matrix<Integer> relations = Matrix<Integer>(0, 0);
};

/// Normalizes presentations to (free rank, invariant factors).
inline GradedModule
graded_from_presentation(RingSpec ring, const std::map<int, Presentation>& degrees) {
  GradedModule m(ring);
  for (const auto& [n, pres] : degrees) {
    if (pres.relations.rows() > 0 && pres.relations.cols() != pres.generators)
      throw InvalidInstance("presentation relation width differs from generator count");
    Matrix<Integer> rel = pres.relations.rows() == 0
                              ? Matrix<Integer>(0, pres.generators)
                              : pres.relations;
    Component c;
    if (ring.is_field()) {
      const std::size_t r = with_ring(ring, [&](const auto& field) -> std::size_t {
        using F = std::decay_t<decltype(field)>;
        if constexpr (F::is_field) {
          MatrixOver<F> mm(rel.rows(), rel.cols(), field.zero());
          for (std::size_t i = 0; i < rel.rows(); ++i)
            for (std::size_t j = 0; j < rel.cols(); ++j)
              mm(i, j) = field.from_integer(rel(i, j));
          return rank(field, mm);
        } else {
          return 0;
        }
      });
      c.free_rank = pres.generators - r;
    } else {
      const auto snf = smith_normal_form(IntegerRing{}, rel);
      c.free_rank = pres.generators - snf.rank();
      for (const auto& d : snf.invariant_factors)
        if (d > 1) c.torsion.push_back(d);
    }
    m.set(n, std::move(c));
  }
  return m;
}

/// Abstract isomorphism: same free ranks and invariant factors per degree.
inline bool iso_check(const GradedModule& a, const GradedModule& b) {
  if (!(a.ring() == b.ring()))
    throw RingMismatch("cannot compare modules over " + a.ring().name() +
                       " and " + b.ring().name());
  return a.components() == b.components();
}

/// Direct sum together with the per-summand offsets into each degree, so
/// the canonical injections and projections are index-range slices.
struct DirectSum {
  GradedModule module;
  /// offsets[n][k]: first coordinate of summand k in degree n.
  std::map<int, std::vector<std::size_t>> offsets;
};

inline DirectSum direct_sum(const std::vector<GradedModule>& summands,
                            RingSpec ring) {
  DirectSum out{GradedModule(ring), {}};
  std::map<int, Component> acc;
  for (const auto& s : summands) {
    if (!(s.ring() == ring))
      throw RingMismatch("direct sum of modules over different rings");
    for (const auto& [n, c] : s.components()) acc[n];
  }
  for (auto& [n, total] : acc) {
    auto& off = out.offsets[n];
    for (const auto& s : summands) {
      off.push_back(total.free_rank);
      const auto& c = s.component(n);
      total.free_rank += c.free_rank;
      total.torsion.insert(total.torsion.end(), c.torsion.begin(), c.torsion.end());
    }
  }
  for (auto& [n, total] : acc) {
    if (!total.torsion.empty()) {
      // renormalize the combined torsion to invariant factors
      Matrix<Integer> diag(total.torsion.size(), total.torsion.size(), Integer(0));
      for (std::size_t i = 0; i < total.torsion.size(); ++i) diag(i, i) = total.torsion[i];
      const auto snf = smith_normal_form(IntegerRing{}, diag);
      total.torsion.clear();
      for (const auto& d : snf.invariant_factors)
        if (d > 1) total.torsion.push_back(d);
    }
    out.module.set(n, total);
  }
  return out;
}

inline DirectSum direct_sum(const std::vector<GradedModule>& summands) {
  if (summands.empty()) return {};
  return direct_sum(summands, summands.front().ring());
}

/// Graded map of fixed degree between free parts: blocks[n] sends degree n
/// of the source to degree n + degree of the target.
template <class R>
struct GradedMap {
  GradedModule source;
  GradedModule target;
  int degree = 0;
  std::map<int, MatrixOver<R>> blocks;

  /// Block for source degree n, zero-filled when absent.
  MatrixOver<R> block(const R& ring, int n) const {
    auto it = blocks.find(n);
    if (it != blocks.end()) return it->second;
    return zero_matrix(ring, source.rank(n), target.rank(n + degree));
  }

  void validate() const {
    for (const auto& [n, m] : blocks)
      if (m.rows() != source.rank(n) || m.cols() != target.rank(n + degree))
        throw DimensionMismatch("block in degree " + std::to_string(n) +
                                " has shape " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected " +
                                std::to_string(source.rank(n)) + "x" +
                                std::to_string(target.rank(n + degree)));
  }
};

} // namespace conley
