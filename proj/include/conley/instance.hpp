#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conley/block_map.hpp"
#include "conley/graded.hpp"
#include "conley/poset.hpp"
#include "conley/symmetry.hpp"

namespace conley {

enum class Mode { connection, c_connection };

inline std::string mode_name(Mode m) {
  return m == Mode::connection ? "connection" : "c-connection";
}

/// A connection-matrix problem: poset, coefficient ring, the C(p), optional
/// fixed diagonal differentials, homology data for some intervals, and an
/// optional symmetry.
template <class R>
class Instance {
public:
  using DiagonalBlocks = std::map<int, MatrixOver<R>>;

  /// Connection mode: C(p) is the (free) index data of {p}; the diagonal is
  /// zero.
  static Instance connection(R ring, Poset poset,
                             std::vector<std::pair<Interval, GradedModule>> index_data) {
    Instance inst(std::move(ring), std::move(poset), Mode::connection);
    inst.set_index_data(std::move(index_data));
    for (std::size_t p = 0; p < inst.poset_.size(); ++p) {
      const auto* g = inst.index_data(Interval::single(p));
      if (!g) throw InvalidInstance("missing index data for {" + inst.poset_.name(p) + "}");
      if (!g->is_free())
        throw InvalidInstance("index data for {" + inst.poset_.name(p) +
                              "} has torsion; use c-connection mode with a free complex");
      inst.summands_.push_back(*g);
    }
    inst.diagonal_.assign(inst.poset_.size(), {});
    inst.validate();
    return inst;
  }

  /// C-connection mode: free C(p) with fixed differentials delta(p) whose
  /// homology must match the index data of {p}.
  static Instance c_connection(R ring, Poset poset, std::vector<GradedModule> summands,
                               std::vector<DiagonalBlocks> diagonal,
                               std::vector<std::pair<Interval, GradedModule>> index_data) {
    Instance inst(std::move(ring), std::move(poset), Mode::c_connection);
    inst.set_index_data(std::move(index_data));
    inst.summands_ = std::move(summands);
    inst.diagonal_ = std::move(diagonal);
    inst.diagonal_.resize(inst.poset_.size());
    inst.validate();
    return inst;
  }

  const R& ring() const noexcept { return ring_; }
  const Poset& poset() const noexcept { return poset_; }
  Mode mode() const noexcept { return mode_; }
  const std::vector<GradedModule>& summands() const noexcept { return summands_; }
  const std::vector<DiagonalBlocks>& diagonal() const noexcept { return diagonal_; }
  const std::vector<std::pair<Interval, GradedModule>>& index_data() const noexcept {
    return index_;
  }
  const GradedModule* index_data(Interval iv) const {
    for (const auto& [k, g] : index_)
      if (k == iv) return &g;
    return nullptr;
  }
  const std::optional<GroupAction<R>>& symmetry() const noexcept { return symmetry_; }

  void set_symmetry(std::vector<GroupElement<R>> generators) {
    symmetry_ = GroupAction<R>::generate(ring_, poset_, summands_, std::move(generators));
  }

  /// Copy with extra (or replaced) interval data.
  Instance with_index_data(Interval iv, GradedModule g) const {
    Instance out = *this;
    auto data = index_;
    data.erase(std::remove_if(data.begin(), data.end(),
                              [&](const auto& e) { return e.first == iv; }),
               data.end());
    data.emplace_back(iv, std::move(g));
    out.set_index_data(std::move(data));
    out.validate();
    return out;
  }

  /// The block map holding only the fixed diagonal.
  BlockMap<R> base_map() const {
    BlockMap<R> delta(ring_, poset_, summands_);
    for (std::size_t p = 0; p < poset_.size(); ++p)
      for (const auto& [n, m] : diagonal_[p]) delta.set_block(p, p, n, m);
    return delta;
  }

  bool strict() const { return mode_ == Mode::connection; }

private:
  Instance(R ring, Poset poset, Mode mode)
      : ring_(std::move(ring)), poset_(std::move(poset)), mode_(mode) {}

  void set_index_data(std::vector<std::pair<Interval, GradedModule>> data) {
    std::sort(data.begin(), data.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!poset_.is_interval(data[i].first))
        throw NotAnInterval(poset_.format(data[i].first) + " is not an interval");
      if (i > 0 && data[i].first == data[i - 1].first)
        throw InvalidInstance("duplicate index data for " + poset_.format(data[i].first));
      if (!(data[i].second.ring() == ring_.spec()))
        throw RingMismatch("index data for " + poset_.format(data[i].first) +
                           " is over " + data[i].second.ring().name());
    }
    index_ = std::move(data);
  }

  void validate() const {
    if (summands_.size() != poset_.size())
      throw InvalidInstance("need one complex per poset element");
    for (std::size_t p = 0; p < poset_.size(); ++p) {
      const auto& name = poset_.name(p);
      const auto* g = index_data(Interval::single(p));
      if (!g) throw InvalidInstance("missing index data for {" + name + "}");
      if (!summands_[p].is_free())
        throw InvalidInstance("C(" + name + ") must be free");
      if (mode_ == Mode::connection) {
        if (!diagonal_[p].empty())
          for (const auto& [n, m] : diagonal_[p])
            if (!is_zero(ring_, m))
              throw InvalidInstance("connection mode has a zero diagonal");
        if (!iso_check(summands_[p], *g))
          throw InvalidInstance("C(" + name + ") is not isomorphic to its index data");
        continue;
      }
      // c-connection: delta(p) must be a differential with the right homology
      BlockMap<R> single(ring_, Poset::from_relations({name}, {}), {summands_[p]});
      for (const auto& [n, m] : diagonal_[p]) {
        if (m.rows() != summands_[p].rank(n) || m.cols() != summands_[p].rank(n - 1))
          throw InvalidInstance("differential of C(" + name + ") in degree " +
                                std::to_string(n) + " has the wrong shape");
        single.set_block(0, 0, n, m);
      }
      if (!check_boundary(single))
        throw InfeasibleDiagonal("differential of C(" + name + ") does not square to zero");
      const auto h = homology(single, Interval::single(0));
      if (!iso_check(h, *g))
        throw InvalidInstance("homology of C(" + name + ") is " + h.to_string() +
                              " but its index data is " + g->to_string());
    }
  }

  R ring_;
  Poset poset_;
  Mode mode_;
  std::vector<GradedModule> summands_;
  std::vector<DiagonalBlocks> diagonal_;
  std::vector<std::pair<Interval, GradedModule>> index_;
  std::optional<GroupAction<R>> symmetry_;
};

} // namespace conley
