#pragma once

// Shared fixtures, random generators and brute-force oracles for the test
// binaries. Oracles here work from definitions only and do not call the
// library routines they are used to check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "conley/conley.hpp"

namespace testing_support {

using namespace conley;

using Rng = std::mt19937_64;

inline std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(std::to_string(i));
  return out;
}

// ---------------------------------------------------------------------------
// Posets

/// Strict order on n elements given as a relation matrix gt[q][p], closed
/// transitively by Floyd-Warshall.
using Relation = std::vector<std::vector<bool>>;

inline Relation close(Relation gt) {
  const std::size_t n = gt.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (gt[i][k] && gt[k][j]) gt[i][j] = true;
  return gt;
}

/// Random order: a random DAG on a shuffled labelling, edges only from
/// higher to lower position.
inline Relation random_relation(Rng& rng, std::size_t n, double density) {
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::shuffle(label.begin(), label.end(), rng);
  std::bernoulli_distribution edge(density);
  Relation gt(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (edge(rng)) gt[label[a]][label[b]] = true;
  return close(gt);
}

inline Poset to_poset(const Relation& gt) {
  std::vector<std::pair<std::string, std::string>> rel;
  const auto ns = names(gt.size());
  for (std::size_t q = 0; q < gt.size(); ++q)
    for (std::size_t p = 0; p < gt.size(); ++p)
      if (gt[q][p]) rel.emplace_back(ns[q], ns[p]);
  return Poset::from_relations(ns, rel);
}

/// Every strict order on n <= 4 labelled elements, by filtering all
/// relations for irreflexivity and transitivity (antisymmetry follows).
inline std::vector<Relation> all_relations(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p)
      if (q != p) cells.emplace_back(q, p);
  std::vector<Relation> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells.size()); ++mask) {
    Relation gt(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (mask >> i & 1) gt[cells[i].first][cells[i].second] = true;
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b)
        if (gt[a][b] && gt[b][a]) ok = false;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b)
        for (std::size_t c = 0; c < n && ok; ++c)
          if (gt[a][b] && gt[b][c] && !gt[a][c]) ok = false;
    if (ok) out.push_back(gt);
  }
  return out;
}

/// One strict order per isomorphism class on n elements: naturally labelled
/// orders (q > p only if q > p as integers) cover every class, and the
/// lexicographically least relabelling picks one representative.
inline std::vector<Relation> relations_up_to_isomorphism(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < q; ++p) cells.emplace_back(q, p);
  std::vector<std::size_t> perm(n);
  auto code = [&](const Relation& gt) {
    std::uint64_t c = 0;
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p = 0; p < n; ++p) c = c << 1 | (gt[perm[q]][perm[p]] ? 1 : 0);
    return c;
  };
  std::map<std::uint64_t, Relation> classes;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells.size()); ++mask) {
    Relation gt(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (mask >> i & 1) gt[cells[i].first][cells[i].second] = true;
    if (close(gt) != gt) continue;
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t best = code(gt);
    while (std::next_permutation(perm.begin(), perm.end())) best = std::min(best, code(gt));
    classes.emplace(best, gt);
  }
  std::vector<Relation> out;
  for (auto& [c, gt] : classes) out.push_back(std::move(gt));
  return out;
}

inline std::set<std::uint64_t> bits_of(const std::vector<Interval>& ivs) {
  std::set<std::uint64_t> out;
  for (auto iv : ivs) out.insert(iv.bits());
  return out;
}

inline std::set<std::vector<std::uint64_t>> bits_of(const std::vector<std::vector<Interval>>& tuples) {
  std::set<std::vector<std::uint64_t>> out;
  for (const auto& t : tuples) {
    std::vector<std::uint64_t> v;
    for (auto iv : t) v.push_back(iv.bits());
    out.insert(v);
  }
  return out;
}

/// Convexity by definition over explicit member sets.
inline bool oracle_is_interval(const Relation& gt, std::uint64_t s) {
  const std::size_t n = gt.size();
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t p = 0; p < n; ++p)
        if ((s >> q & 1) && (s >> p & 1) && !(s >> r & 1) && gt[q][r] && gt[r][p]) return false;
  return true;
}

inline std::set<std::uint64_t> oracle_intervals(const Relation& gt) {
  std::set<std::uint64_t> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << gt.size()); ++s)
    if (oracle_is_interval(gt, s)) out.insert(s);
  return out;
}

/// Adjacent tuple by definition: disjoint interval parts with interval
/// union and no element of an earlier part above one of a later part.
inline bool oracle_is_adjacent(const Relation& gt, const std::vector<std::uint64_t>& parts) {
  std::uint64_t all = 0;
  for (auto s : parts) {
    if (!oracle_is_interval(gt, s) || (all & s)) return false;
    all |= s;
  }
  if (!oracle_is_interval(gt, all)) return false;
  for (std::size_t j = 0; j < parts.size(); ++j)
    for (std::size_t k = j + 1; k < parts.size(); ++k)
      for (std::size_t a = 0; a < gt.size(); ++a)
        for (std::size_t b = 0; b < gt.size(); ++b)
          if ((parts[j] >> a & 1) && (parts[k] >> b & 1) && gt[a][b]) return false;
  return true;
}

inline std::set<std::vector<std::uint64_t>> oracle_adjacent(const Relation& gt, std::size_t len) {
  const auto ivs = oracle_intervals(gt);
  std::set<std::vector<std::uint64_t>> out;
  std::vector<std::uint64_t> cur;
  std::function<void()> rec = [&] {
    if (cur.size() == len) {
      if (oracle_is_adjacent(gt, cur)) out.insert(cur);
      return;
    }
    std::uint64_t used = 0;
    for (auto s : cur) used |= s;
    for (auto s : ivs) {
      if (s & used) continue; // parts must be disjoint
      cur.push_back(s);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

// ---------------------------------------------------------------------------
// Small exact oracles

/// Determinant by cofactor expansion along the first row.
inline Integer cofactor_det(const Matrix<Integer>& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Integer det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m(0, c) == 0) continue;
    Matrix<Integer> minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != c) minor(i - 1, k++) = m(i, j);
    const Integer term = m(0, c) * cofactor_det(minor);
    det += (c % 2 == 0) ? term : Integer(-term);
  }
  return det;
}

/// gcd of all k x k minors, the k-th determinantal divisor.
inline Integer determinantal_divisor(const Matrix<Integer>& m, std::size_t k) {
  Integer g = 0;
  std::vector<std::size_t> rows, cols;
  std::function<void(std::size_t)> pick_cols;
  std::function<void(std::size_t)> pick_rows = [&](std::size_t start) {
    if (rows.size() == k) {
      pick_cols(0);
      return;
    }
    for (std::size_t r = start; r < m.rows(); ++r) {
      rows.push_back(r);
      pick_rows(r + 1);
      rows.pop_back();
    }
  };
  pick_cols = [&](std::size_t start) {
    if (cols.size() == k) {
      Matrix<Integer> sub(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
      g = boost::multiprecision::gcd(g, Integer(abs(cofactor_det(sub))));
      return;
    }
    for (std::size_t c = start; c < m.cols(); ++c) {
      cols.push_back(c);
      pick_cols(c + 1);
      cols.pop_back();
    }
  };
  pick_rows(0);
  return g;
}

/// Rank over GF(p) by counting solutions of x * M = 0 over all x.
inline std::size_t rank_by_counting(const Matrix<std::int64_t>& m, std::int64_t p) {
  const std::size_t rows = m.rows();
  std::uint64_t total = 1, kernel = 0;
  for (std::size_t i = 0; i < rows; ++i) total *= static_cast<std::uint64_t>(p);
  std::vector<std::int64_t> x(rows, 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < rows; ++i) {
      x[i] = static_cast<std::int64_t>(c % static_cast<std::uint64_t>(p));
      c /= static_cast<std::uint64_t>(p);
    }
    bool zero = true;
    for (std::size_t j = 0; j < m.cols() && zero; ++j) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < rows; ++i) s = (s + x[i] * m(i, j)) % p;
      zero = s == 0;
    }
    kernel += zero;
  }
  std::size_t nullity = 0;
  while (kernel > 1) {
    kernel /= static_cast<std::uint64_t>(p);
    ++nullity;
  }
  return rows - nullity;
}

inline Matrix<Integer> random_integer_matrix(Rng& rng, std::size_t r, std::size_t c, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  Matrix<Integer> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

template <class R>
MatrixOver<R> random_matrix(const R& ring, Rng& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<int> d(-3, 3);
  auto m = zero_matrix(ring, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = ring.from_integer(Integer(d(rng)));
  return m;
}

/// Random integer chain complex C_3 -> C_2 -> C_1 -> C_0: each differential
/// is a random combination of vectors in the kernel of the one above it.
inline ChainComplex<IntegerRing> random_integer_complex(Rng& rng) {
  const IntegerRing z;
  std::uniform_int_distribution<std::size_t> dim(0, 3);
  ChainComplex<IntegerRing> c;
  c.lo = -1;
  c.hi = 4;
  for (int n = 0; n <= 3; ++n) c.ranks[n] = dim(rng);
  // row convention: d_n is dim C_n x dim C_{n-1}, d_{n+1} * d_n = 0
  Matrix<Integer> above = random_integer_matrix(rng, c.dim(3), c.dim(2), 3);
  c.differential[3] = above;
  for (int n = 2; n >= 1; --n) {
    // columns of d_n must lie in {v : above * v = 0}
    const auto k = left_kernel(z, transpose(above)); // rows span that kernel
    const auto mix = random_integer_matrix(rng, c.dim(n - 1), k.rows(), 2);
    Matrix<Integer> d = k.rows() == 0 ? Matrix<Integer>(c.dim(n), c.dim(n - 1), Integer(0))
                                      : transpose(multiply(z, mix, k));
    c.differential[n] = d;
    above = d;
  }
  return c;
}

/// Random block map over GF(p) on the given summands that squares to zero,
/// found by rejection; the zero map if no attempt succeeds.
inline BlockMap<PrimeField> random_complex(Rng& rng, const PrimeField& ring, const Poset& poset,
                                           const std::vector<GradedModule>& summands,
                                           bool with_diagonal, int attempts = 40) {
  BlockMap<PrimeField> zero(ring, poset, summands);
  const auto [lo, hi] = zero.degree_window();
  for (int a = 0; a < attempts; ++a) {
    auto d = zero;
    for (std::size_t q = 0; q < poset.size(); ++q)
      for (std::size_t p = 0; p < poset.size(); ++p) {
        if (!(poset.greater(q, p) || (with_diagonal && q == p))) continue;
        for (int n = lo; n <= hi; ++n)
          d.set_block(q, p, n, random_matrix(ring, rng, d.rows_of(q, n), d.cols_of(p, n)));
      }
    if (check_boundary(d)) return d;
  }
  return zero;
}

// ---------------------------------------------------------------------------
// Fixtures

inline Poset attractor_repeller_poset() {
  return Poset::from_relations({"1", "2", "3"}, {{"3", "1"}, {"3", "2"}});
}

inline Instance<PrimeField> attractor_repeller(std::int64_t p, bool two_element_data = false) {
  const auto spec = RingSpec::gf(p);
  std::vector<std::pair<Interval, GradedModule>> data{
      {Interval::of({0}), graded_from_index(spec, 0)},
      {Interval::of({1}), graded_from_index(spec, 0)},
      {Interval::of({2}), graded_from_index(spec, 1)},
      {Interval::of({0, 1, 2}), graded_from_ranks(spec, {{0, 1}})}};
  if (two_element_data) {
    data.emplace_back(Interval::of({0, 2}), GradedModule(spec));
    data.emplace_back(Interval::of({1, 2}), GradedModule(spec));
  }
  return Instance<PrimeField>::connection(PrimeField(p), attractor_repeller_poset(), data);
}

/// The C2 variant: 1 and 2 swapped, 3 fixed, identity maps.
inline Instance<PrimeField> symmetric_attractor_repeller(std::int64_t p) {
  auto inst = attractor_repeller(p);
  GroupElement<PrimeField> swap;
  swap.perm = {1, 0, 2};
  inst.set_symmetry({swap});
  return inst;
}

inline Instance<PrimeField> circle(std::int64_t p) {
  const auto spec = RingSpec::gf(p);
  return Instance<PrimeField>::connection(
      PrimeField(p), Poset::from_relations({"1", "2"}, {{"2", "1"}}),
      {{Interval::of({0}), graded_from_index(spec, 0)},
       {Interval::of({1}), graded_from_index(spec, 1)},
       {Interval::of({0, 1}), graded_from_ranks(spec, {{0, 1}, {1, 1}})}});
}

/// Pairs (Delta_{3,1}, Delta_{3,2}) of an attractor-repeller solution set.
inline std::set<std::pair<std::int64_t, std::int64_t>>
pairs_of(const SolutionSet<PrimeField>& set) {
  std::set<std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& s : set.solutions)
    out.emplace(s.delta.block(2, 0, 1)(0, 0), s.delta.block(2, 1, 1)(0, 0));
  return out;
}

// ---------------------------------------------------------------------------
// Random instances and the brute-force search oracle

/// Random connection or c-connection instance over GF(p) with at most
/// `max_unknowns` scalars. Interval data is the homology of a random hidden
/// complex (so at least one solution usually exists), with an occasional
/// arbitrary module mixed in to exercise empty solution sets.
inline Instance<PrimeField> random_instance(Rng& rng, std::int64_t p, std::size_t max_elements,
                                            std::size_t max_unknowns) {
  const PrimeField ring(p);
  const auto spec = ring.spec();
  std::uniform_int_distribution<std::size_t> size_d(1, max_elements);
  std::uniform_int_distribution<int> rank_d(0, 2), deg_d(0, 2), coin(0, 3);
  for (;;) {
    const std::size_t n = size_d(rng);
    const Relation gt = random_relation(rng, n, 0.5);
    const Poset poset = to_poset(gt);
    const bool c_mode = coin(rng) == 0;
    std::vector<GradedModule> summands;
    for (std::size_t q = 0; q < n; ++q) {
      std::map<int, std::size_t> ranks;
      const int k = 1 + (c_mode ? 1 : 0);
      for (int i = 0; i < k; ++i) {
        const int d = deg_d(rng);
        ranks[d] += static_cast<std::size_t>(std::max(rank_d(rng), i == 0 ? 1 : 0));
      }
      if (c_mode && coin(rng) < 2) ranks[ranks.begin()->first + 1] += 1;
      summands.push_back(graded_from_ranks(spec, ranks));
    }
    BlockMap<PrimeField> hidden(ring, poset, summands);
    const auto [lo, hi] = hidden.degree_window();
    std::size_t unknowns = 0;
    for (auto [q, pp] : poset.relations())
      for (int d = lo; d <= hi; ++d) unknowns += hidden.rows_of(q, d) * hidden.cols_of(pp, d);
    if (unknowns > max_unknowns || (unknowns == 0 && std::uniform_int_distribution<int>(0, 9)(rng) != 0)) continue;

    // hidden diagonal: random until it squares to zero, else zero
    std::vector<std::map<int, MatrixOver<PrimeField>>> diagonal(n);
    if (c_mode) {
      for (std::size_t q = 0; q < n; ++q) {
        for (int attempt = 0; attempt < 8; ++attempt) {
          BlockMap<PrimeField> single(ring, Poset::from_relations({"x"}, {}), {summands[q]});
          std::map<int, MatrixOver<PrimeField>> blocks;
          for (int d = lo; d <= hi; ++d) {
            auto m = random_matrix(ring, rng, summands[q].rank(d), summands[q].rank(d - 1));
            if (m.rows() && m.cols()) blocks[d] = m;
            single.set_block(0, 0, d, m);
          }
          if (check_boundary(single)) {
            diagonal[q] = blocks;
            break;
          }
        }
      }
      for (std::size_t q = 0; q < n; ++q)
        for (const auto& [d, m] : diagonal[q]) hidden.set_block(q, q, d, m);
    }
    // hidden off-diagonal part: random attempts, keep one that is a complex
    for (int attempt = 0; attempt < 6; ++attempt) {
      auto trial = hidden;
      for (auto [q, pp] : poset.relations())
        for (int d = lo; d <= hi; ++d)
          trial.set_block(q, pp, d,
                          random_matrix(ring, rng, trial.rows_of(q, d), trial.cols_of(pp, d)));
      if (check_boundary(trial)) {
        hidden = trial;
        break;
      }
    }
    std::vector<std::pair<Interval, GradedModule>> data;
    for (std::size_t q = 0; q < n; ++q)
      data.emplace_back(Interval::single(q), homology(hidden, Interval::single(q)));
    std::vector<Interval> larger;
    for (const auto& iv : poset.intervals())
      if (iv.size() >= 2 && coin(rng) != 0) larger.push_back(iv);
    // one instance in five gets a single arbitrary module
    std::uniform_int_distribution<std::size_t> five(0, 4);
    const bool arbitrary = !larger.empty() && five(rng) == 0;
    const std::size_t victim =
        larger.empty() ? 0 : std::uniform_int_distribution<std::size_t>(0, larger.size() - 1)(rng);
    for (std::size_t i = 0; i < larger.size(); ++i) {
      if (arbitrary && i == victim)
        data.emplace_back(larger[i], graded_from_ranks(spec, {{deg_d(rng), 1}}));
      else
        data.emplace_back(larger[i], homology(hidden, larger[i]));
    }
    if (!c_mode) {
      bool free_singletons = true;
      for (std::size_t q = 0; q < n; ++q)
        if (!iso_check(data[q].second, summands[q])) free_singletons = false;
      if (!free_singletons) continue;
      return Instance<PrimeField>::connection(ring, poset, data);
    }
    return Instance<PrimeField>::c_connection(ring, poset, summands, diagonal, data);
  }
}

/// All |field|^k assignments of the sub-diagonal scalars, filtered through
/// verify; returned in the same lexicographic order enumerate promises.
inline std::vector<BlockMap<PrimeField>> brute_force(const Instance<PrimeField>& inst) {
  const auto& ring = inst.ring();
  const auto base = inst.base_map();
  const auto [lo, hi] = base.degree_window();
  std::vector<std::tuple<std::size_t, std::size_t, int, std::size_t, std::size_t>> slots;
  // canonical order: pairs by height of q, then q, then p; degree; row; col
  std::vector<std::pair<std::size_t, std::size_t>> pairs = inst.poset().relations();
  auto height = [&](std::size_t q) {
    std::size_t h = 0;
    std::function<std::size_t(std::size_t)> rec = [&](std::size_t x) -> std::size_t {
      std::size_t best = 0;
      for (std::size_t y = 0; y < inst.poset().size(); ++y)
        if (inst.poset().greater(x, y)) best = std::max(best, rec(y) + 1);
      return best;
    };
    h = rec(q);
    return h;
  };
  std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return std::tuple(height(a.first), a.first, a.second) <
           std::tuple(height(b.first), b.first, b.second);
  });
  for (auto [q, p] : pairs)
    for (int d = lo; d <= hi; ++d)
      for (std::size_t r = 0; r < base.rows_of(q, d); ++r)
        for (std::size_t c = 0; c < base.cols_of(p, d); ++c) slots.emplace_back(q, p, d, r, c);

  const auto field = ring.characteristic();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < slots.size(); ++i) total *= static_cast<std::uint64_t>(field);
  std::vector<BlockMap<PrimeField>> out;
  VerifyOptions opts;
  opts.exact_sequences = false;
  for (std::uint64_t code = 0; code < total; ++code) {
    auto delta = base;
    // most significant digit first, so codes run in lexicographic order
    std::uint64_t c = code;
    for (std::size_t i = slots.size(); i-- > 0;) {
      const auto [q, p, d, r, col] = slots[i];
      delta.slot(q, p, d)(r, col) = static_cast<std::int64_t>(c % static_cast<std::uint64_t>(field));
      c /= static_cast<std::uint64_t>(field);
    }
    if (verify(inst, delta, opts).passed()) out.push_back(std::move(delta));
  }
  return out;
}

} // namespace testing_support
