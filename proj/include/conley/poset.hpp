#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "conley/error.hpp"

namespace conley {

/// Subset of a poset's ground set, as a bitmask over element positions.
/// Member lists are always reported in the poset's element order.
class Interval {
public:
  constexpr Interval() = default;
  constexpr explicit Interval(std::uint64_t bits) : bits_(bits) {}

  static Interval single(std::size_t element) {
    return Interval(std::uint64_t{1} << element);
  }
  static Interval of(std::initializer_list<std::size_t> elements) {
    std::uint64_t b = 0;
    for (auto e : elements) b |= std::uint64_t{1} << e;
    return Interval(b);
  }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  constexpr bool contains(std::size_t e) const noexcept {
    return (bits_ >> e) & 1U;
  }

  /// Allocation-free iteration over the members in increasing order.
  class Elements {
  public:
    class iterator {
    public:
      constexpr explicit iterator(std::uint64_t b) : b_(b) {}
      std::size_t operator*() const { return static_cast<std::size_t>(std::countr_zero(b_)); }
      iterator& operator++() {
        b_ &= b_ - 1;
        return *this;
      }
      friend constexpr bool operator==(iterator, iterator) = default;

    private:
      std::uint64_t b_;
    };
    constexpr explicit Elements(std::uint64_t b) : b_(b) {}
    iterator begin() const { return iterator(b_); }
    iterator end() const { return iterator(0); }

  private:
    std::uint64_t b_;
  };
  constexpr Elements elements() const noexcept { return Elements(bits_); }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1)
      out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    return out;
  }

  constexpr Interval operator|(Interval o) const { return Interval(bits_ | o.bits_); }
  constexpr Interval operator&(Interval o) const { return Interval(bits_ & o.bits_); }

  friend constexpr bool operator==(Interval, Interval) = default;

  /// Canonical order: by size, then lexicographic on member lists.
  friend bool operator<(Interval a, Interval b) {
    if (a.size() != b.size()) return a.size() < b.size();
    // the first differing position holds the lowest element in exactly one
    const std::uint64_t diff = a.bits_ ^ b.bits_;
    return (a.bits_ & diff & (~diff + 1)) != 0;
  }

private:
  std::uint64_t bits_ = 0;
};

/// Finite strict partial order on an ordered set of named elements. The
/// relation is stored transitively closed.
class Poset {
public:
  static constexpr std::size_t max_elements = 64;

  /// `relations` holds (q, p) pairs meaning q > p.
  static Poset from_relations(
      std::vector<std::string> elements,
      const std::vector<std::pair<std::string, std::string>>& relations) {
    if (elements.empty()) throw InvalidInstance("poset has no elements");
    if (elements.size() > max_elements)
      throw InvalidInstance("posets are limited to 64 elements");
    Poset p;
    p.names_ = std::move(elements);
    for (std::size_t i = 0; i < p.names_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (p.names_[i] == p.names_[j])
          throw InvalidInstance("duplicate element '" + p.names_[i] + "'");
    const std::size_t n = p.names_.size();
    p.below_.assign(n, 0);
    for (const auto& [hi, lo] : relations)
      p.below_[p.index_of(hi)] |= std::uint64_t{1} << p.index_of(lo);
    // Warshall closure on bitsets
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if ((p.below_[i] >> k) & 1U) p.below_[i] |= p.below_[k];
    for (std::size_t i = 0; i < n; ++i)
      if ((p.below_[i] >> i) & 1U)
        throw CycleError("relations force " + p.names_[i] + " > " +
                         p.names_[i]);
    p.heights_.assign(n, 0);
    for (std::size_t round = 0; round < n; ++round)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          if (p.greater(q, r))
            p.heights_[q] = std::max(p.heights_[q], p.heights_[r] + 1);
    return p;
  }

  /// Same as from_relations with positional indices.
  static Poset from_indices(std::size_t n,
                            const std::vector<std::pair<std::size_t, std::size_t>>& gt) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i + 1));
    std::vector<std::pair<std::string, std::string>> rel;
    for (auto [q, p] : gt) {
      if (q >= n || p >= n) throw UnknownElement("index out of range");
      rel.emplace_back(names[q], names[p]);
    }
    return from_relations(std::move(names), rel);
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& elements() const noexcept { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    throw UnknownElement("unknown element '" + name + "'");
  }

  /// q > p
  bool greater(std::size_t q, std::size_t p) const {
    return (below_[q] >> p) & 1U;
  }
  std::uint64_t below_mask(std::size_t q) const { return below_[q]; }

  /// All (q, p) with q > p, ordered by q then p.
  std::vector<std::pair<std::size_t, std::size_t>> relations() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t q = 0; q < size(); ++q)
      for (std::size_t p = 0; p < size(); ++p)
        if (greater(q, p)) out.emplace_back(q, p);
    return out;
  }

  /// Length of the longest descending chain starting at q.
  std::size_t height(std::size_t q) const { return heights_.at(q); }

  Interval all() const {
    return Interval(size() == 64 ? ~std::uint64_t{0}
                                 : (std::uint64_t{1} << size()) - 1);
  }

  void check_subset(Interval s) const {
    if ((s.bits() & ~all().bits()) != 0)
      throw UnknownElement("subset references elements outside the poset");
  }

  /// Convexity: p, q in S and q > r > p imply r in S.
  bool is_interval(Interval s) const {
    check_subset(s);
    // an outside r below some member and above another breaks convexity
    std::uint64_t under = 0;
    for (auto q : s.elements()) under |= below_[q];
    for (auto r : Interval(under & ~s.bits()).elements())
      if (below_[r] & s.bits()) return false;
    return true;
  }

  /// Every interval, in canonical order.
  std::vector<Interval> intervals() const {
    if (size() > 24)
      throw InvalidInstance("interval enumeration is limited to 24 elements");
    std::vector<Interval> out;
    const std::uint64_t limit = std::uint64_t{1} << size();
    for (std::uint64_t b = 0; b < limit; ++b)
      if (is_interval(Interval(b))) out.emplace_back(b);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Mutually disjoint parts, union an interval, and no element of an
  /// earlier part above an element of a later one.
  bool is_adjacent(const std::vector<Interval>& parts) const {
    std::uint64_t seen = 0;
    for (const auto& part : parts) {
      if (!is_interval(part) || (part.bits() & seen)) return false;
      seen |= part.bits();
    }
    if (!is_interval(Interval(seen))) return false;
    for (std::size_t j = 0; j < parts.size(); ++j)
      for (std::size_t k = j + 1; k < parts.size(); ++k)
        for (auto p : parts[j].elements())
          if (below_[p] & parts[k].bits()) return false;
    return true;
  }

  /// All adjacent n-tuples (the empty interval allowed as a part), ordered
  /// lexicographically by the canonical position of each part.
  std::vector<std::vector<Interval>> adjacent_tuples(std::size_t n) const {
    if (n == 0) throw InvalidInstance("tuple length must be positive");
    const auto ivs = intervals();
    std::vector<std::vector<Interval>> out;
    std::vector<Interval> cur;
    auto rec = [&](auto&& self, std::uint64_t used) -> void {
      if (cur.size() == n) {
        if (is_adjacent(cur)) out.push_back(cur);
        return;
      }
      for (const auto& iv : ivs) {
        if (iv.bits() & used) continue;
        // no earlier part may lie above this one
        bool ok = true;
        for (const auto& prev : cur)
          for (auto p : prev.members())
            if (below_[p] & iv.bits()) ok = false;
        if (!ok) continue;
        cur.push_back(iv);
        self(self, used | iv.bits());
        cur.pop_back();
      }
    };
    rec(rec, 0);
    return out;
  }

  bool noncomparable(Interval a, Interval b) const {
    return is_adjacent({a, b}) && is_adjacent({b, a});
  }

  /// "{1,3}" with names in element order.
  std::string format(Interval s) const {
    std::string out = "{";
    bool first = true;
    for (auto m : s.members()) {
      if (!first) out += ",";
      out += names_[m];
      first = false;
    }
    return out + "}";
  }

  /// "1,3": the canonical key used by instance files.
  std::string key(Interval s) const {
    std::string out;
    for (auto m : s.members()) {
      if (!out.empty()) out += ",";
      out += names_[m];
    }
    return out;
  }

  /// Inverse of `key`; whitespace around names is ignored.
  Interval parse_key(const std::string& text) const {
    std::uint64_t bits = 0;
    std::size_t start = 0;
    if (text.find_first_not_of(" \t") == std::string::npos) return Interval{};
    while (start <= text.size()) {
      auto end = text.find(',', start);
      if (end == std::string::npos) end = text.size();
      auto tok = text.substr(start, end - start);
      const auto a = tok.find_first_not_of(" \t");
      const auto b = tok.find_last_not_of(" \t");
      tok = a == std::string::npos ? "" : tok.substr(a, b - a + 1);
      bits |= std::uint64_t{1} << index_of(tok);
      start = end + 1;
    }
    return Interval(bits);
  }

  friend bool operator==(const Poset& a, const Poset& b) {
    return a.names_ == b.names_ && a.below_ == b.below_;
  }

private:
  std::vector<std::string> names_;
  std::vector<std::uint64_t> below_; // below_[q] has bit p iff q > p
  std::vector<std::size_t> heights_;
};

} // namespace conley
