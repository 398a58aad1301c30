#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace conley;
using namespace testing_support;

namespace {

/// Chain 2 > 1 with C(1) in degree 0, C(2) in degree 1 and Delta_{2,1} = [d].
template <class R>
BlockMap<R> two_cell(const R& ring, typename R::value_type d) {
  BlockMap<R> delta(ring, Poset::from_indices(2, {{1, 0}}),
                    {graded_from_index(ring.spec(), 0), graded_from_index(ring.spec(), 1)});
  delta.set_block(1, 0, 1, MatrixOver<R>{{d}});
  return delta;
}

const Interval lower = Interval::single(0);
const Interval upper = Interval::single(1);

template <class R>
void check_random_sequences(const R& ring, Rng& rng, int trials) {
  for (int t = 0; t < trials; ++t) {
    const auto poset = to_poset(random_relation(rng, 4, 0.45));
    std::vector<GradedModule> summands;
    std::uniform_int_distribution<std::size_t> rk(0, 2);
    for (std::size_t q = 0; q < 4; ++q)
      summands.push_back(graded_from_ranks(ring.spec(), {{0, rk(rng)}, {1, rk(rng)}, {2, rk(rng)}}));
    BlockMap<R> d(ring, poset, summands);
    // random strictly triangular complexes by rejection
    const auto [lo, hi] = d.degree_window();
    for (int a = 0; a < 30; ++a) {
      BlockMap<R> trial(ring, poset, summands);
      for (auto [q, p] : poset.relations())
        for (int n = lo; n <= hi; ++n)
          trial.set_block(q, p, n, random_matrix(ring, rng, trial.rows_of(q, n), trial.cols_of(p, n)));
      if (check_boundary(trial)) {
        d = trial;
        break;
      }
    }
    for (const auto& pair : poset.adjacent_tuples(2)) {
      if (pair[0].empty() || pair[1].empty()) continue;
      INFO("trial " << t << " pair " << poset.format(pair[0]) << " " << poset.format(pair[1]));
      CHECK(verify_triangle(d, pair[0], pair[1]));
    }
  }
}

} // namespace

TEST_CASE("connecting homomorphism of a two-cell complex", "[les]") {
  const RationalField q;
  CHECK(connecting_homomorphism(two_cell(q, Rational(1)), lower, upper, 1) ==
        Matrix<Rational>{{1}});
  CHECK(connecting_homomorphism(two_cell(q, Rational(0)), lower, upper, 1) ==
        Matrix<Rational>{{0}});
  CHECK(connecting_homomorphism(two_cell(q, Rational(3)), lower, upper, 1) ==
        Matrix<Rational>{{3}});
  CHECK_THROWS_AS(connecting_homomorphism(two_cell(q, Rational(1)), upper, lower, 1), NotAdjacent);
}

TEST_CASE("connecting maps of the attractor-repeller read off the off-diagonal scalars",
          "[les]") {
  const PrimeField f(2);
  for (auto [a, b] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {1, 0}}) {
    auto inst = attractor_repeller(2);
    auto d = inst.base_map();
    d.set_block(2, 0, 1, Matrix<std::int64_t>{{a}});
    d.set_block(2, 1, 1, Matrix<std::int64_t>{{b}});
    const auto top = Interval::single(2);
    CHECK(connecting_homomorphism(d, Interval::single(0), top, 1) == Matrix<std::int64_t>{{a}});
    CHECK(connecting_homomorphism(d, Interval::single(1), top, 1) == Matrix<std::int64_t>{{b}});
    // the pair ({1,2},{3}) sees both scalars at once
    const auto both = connecting_homomorphism(d, Interval::of({0, 1}), top, 1);
    REQUIRE(both.rows() == 1);
    REQUIRE(both.cols() == 2);
    CHECK(rank(f, both) == 1);
    for (const auto& pair : d.poset().adjacent_tuples(2))
      if (!pair[0].empty() && !pair[1].empty()) CHECK(verify_triangle(d, pair[0], pair[1]));
  }
}

TEST_CASE("integer connecting map with torsion in the middle", "[les]") {
  const IntegerRing z;
  const auto d = two_cell(z, Integer(2));
  CHECK(connecting_homomorphism(d, lower, upper, 1) == Matrix<Integer>{{2}});
  const auto les = long_exact_sequence(d, lower, upper);
  bool saw_torsion = false;
  for (const auto& t : les.terms)
    if (t.orders == std::vector<Integer>{2}) saw_torsion = true;
  CHECK(saw_torsion);
  CHECK(is_exact(z, les));
}

TEST_CASE("a corrupted connecting map breaks exactness", "[les]") {
  const IntegerRing z;
  const auto les = long_exact_sequence(two_cell(z, Integer(1)), lower, upper);
  REQUIRE(is_exact(z, les));
  std::size_t corrupted = 0;
  for (std::size_t k = 0; k < les.maps.size(); ++k) {
    if (!(les.maps[k] == Matrix<Integer>{{1}})) continue;
    for (const Integer bad : {Integer(0), Integer(2)}) {
      auto broken = les;
      broken.maps[k] = Matrix<Integer>{{bad}};
      CHECK_FALSE(is_exact(z, broken));
      ++corrupted;
    }
  }
  CHECK(corrupted == 2);

  const PrimeField f(3);
  const auto les3 = long_exact_sequence(two_cell(f, 1), lower, upper);
  REQUIRE(is_exact(f, les3));
  for (std::size_t k = 0; k < les3.maps.size(); ++k) {
    if (les3.maps[k].rows() != 1 || les3.maps[k].cols() != 1) continue;
    auto broken = les3;
    broken.maps[k] = Matrix<std::int64_t>{{0}};
    CHECK_FALSE(is_exact(f, broken));
  }
}

TEST_CASE("long exact sequences of random complexes are exact", "[les][property]") {
  Rng rng(41);
  check_random_sequences(PrimeField(2), rng, 25);
  check_random_sequences(PrimeField(3), rng, 25);
  check_random_sequences(RationalField{}, rng, 15);
  check_random_sequences(IntegerRing{}, rng, 15);
}

TEST_CASE("the field exactness test agrees with the lattice comparison", "[les][property]") {
  Rng rng(43);
  const PrimeField f(2);
  std::size_t exact = 0, inexact = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t a = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    const std::size_t b = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    LongExactSequence<PrimeField> les;
    les.terms = {{Interval(), 0, std::vector<Integer>(a, 0)},
                 {Interval(), 0, std::vector<Integer>(m, 0)},
                 {Interval(), 0, std::vector<Integer>(b, 0)}};
    les.maps = {random_matrix(f, rng, a, m), random_matrix(f, rng, m, b)};
    const bool lattice = exact_at(f, les.maps[0], les.maps[1], les.terms[1].orders,
                                  les.terms[2].orders);
    CHECK(is_exact(f, les) == lattice);
    (lattice ? exact : inexact) += 1;
  }
  CHECK(exact > 20);
  CHECK(inexact > 20);
}

TEST_CASE("cached and uncached triangle checks agree", "[les]") {
  Rng rng(47);
  const PrimeField f(3);
  for (int t = 0; t < 20; ++t) {
    const auto poset = to_poset(random_relation(rng, 4, 0.5));
    std::vector<GradedModule> summands;
    for (std::size_t q = 0; q < 4; ++q)
      summands.push_back(graded_from_ranks(f.spec(), {{0, 1}, {1, q % 2}}));
    const auto d = random_complex(rng, f, poset, summands, false);
    LesCache<PrimeField> cache(d);
    for (const auto& pair : poset.adjacent_tuples(2)) {
      if (pair[0].empty() || pair[1].empty()) continue;
      const auto direct = long_exact_sequence(d, pair[0], pair[1]);
      const auto cached = long_exact_sequence(cache, pair[0], pair[1]);
      CHECK(direct.maps == cached.maps);
      CHECK(verify_triangle(cache, pair[0], pair[1]));
    }
  }
}

TEST_CASE("connecting maps inside the sequence match the standalone map", "[les]") {
  Rng rng(53);
  const PrimeField f(2);
  for (int t = 0; t < 20; ++t) {
    const auto poset = to_poset(random_relation(rng, 3, 0.6));
    std::vector<GradedModule> summands;
    for (std::size_t q = 0; q < 3; ++q)
      summands.push_back(graded_from_ranks(f.spec(), {{q % 2, 1}, {1 + q % 2, 1}}));
    const auto d = random_complex(rng, f, poset, summands, false);
    const auto [lo, hi] = d.degree_window();
    for (const auto& pair : poset.adjacent_tuples(2)) {
      if (pair[0].empty() || pair[1].empty()) continue;
      const auto les = long_exact_sequence(d, pair[0], pair[1]);
      // maps 2, 5, 8, ... are the connecting maps out of degree hi, hi - 1, ...
      for (int n = hi; n > lo; --n) {
        const std::size_t k = 3 * static_cast<std::size_t>(hi - n) + 2;
        REQUIRE(k < les.maps.size());
        CHECK(les.maps[k] == connecting_homomorphism(d, pair[0], pair[1], n));
      }
    }
  }
}
