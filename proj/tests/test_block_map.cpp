#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace conley;
using namespace testing_support;

namespace {

ChainComplex<IntegerRing> two_term(Integer d) {
  ChainComplex<IntegerRing> c;
  c.lo = -1;
  c.hi = 2;
  c.ranks = {{0, 1}, {1, 1}};
  c.differential[1] = Matrix<Integer>{{d}};
  return c;
}

/// dim H_n over GF(p) from counted cycles and boundaries.
std::size_t counted_betti(const ChainComplex<IntegerRing>& c, int n, std::int64_t p) {
  const PrimeField f(p);
  auto reduce = [&](const Matrix<Integer>& m) {
    Matrix<std::int64_t> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = f.from_integer(m(i, j));
    return out;
  };
  const auto dn = reduce(c.d(IntegerRing{}, n));
  const auto dn1 = reduce(c.d(IntegerRing{}, n + 1));
  return c.dim(n) - rank_by_counting(dn, p) - rank_by_counting(dn1, p);
}

} // namespace

TEST_CASE("blocks default to zero and reject wrong shapes", "[block_map]") {
  const PrimeField f(2);
  const auto spec = f.spec();
  BlockMap<PrimeField> d(f, attractor_repeller_poset(),
                         {graded_from_index(spec, 0), graded_from_index(spec, 0),
                          graded_from_index(spec, 1)});
  CHECK(d.block(2, 0, 1) == Matrix<std::int64_t>{{0}});
  CHECK(d.block(0, 2, 1).rows() == 0);
  CHECK_THROWS_AS(d.set_block(2, 0, 1, Matrix<std::int64_t>{{1, 1}}), ShapeMismatch);
  d.set_block(2, 0, 1, Matrix<std::int64_t>{{1}});
  CHECK(d.is_lower_triangular(true));
  CHECK(d.degree_window() == std::pair{-1, 2});
  BlockMap<PrimeField> e(f, attractor_repeller_poset(), d.summands());
  e.slot(2, 0, 1)(0, 0) = 1;
  e.slot(2, 1, 1);
  CHECK(d == e);
}

TEST_CASE("block maps reject torsion and mixed rings", "[block_map]") {
  GradedModule t(RingSpec::integers());
  t.set(0, Component{0, {Integer(2)}});
  CHECK_THROWS_AS(BlockMap<IntegerRing>(IntegerRing{}, Poset::from_indices(1, {}), {t}),
                  ShapeMismatch);
  CHECK_THROWS_AS(BlockMap<IntegerRing>(IntegerRing{}, Poset::from_indices(1, {}),
                                        {graded_from_index(RingSpec::gf(2), 0)}),
                  RingMismatch);
}

TEST_CASE("restriction, square blocks and the boundary condition", "[block_map]") {
  const RationalField q;
  const auto spec = q.spec();
  // chain 3 > 2 > 1 with C(3) in degree 2, C(2) in degree 1, C(1) in degree 0
  BlockMap<RationalField> d(q, Poset::from_indices(3, {{2, 1}, {1, 0}}),
                            {graded_from_index(spec, 0), graded_from_index(spec, 1),
                             graded_from_index(spec, 2)});
  d.set_block(2, 1, 2, Matrix<Rational>{{1}});
  d.set_block(1, 0, 1, Matrix<Rational>{{1}});
  CHECK(square_block(d, 2, 0, 2) == Matrix<Rational>{{1}});
  CHECK_FALSE(check_boundary(d));
  CHECK_THROWS_AS(homology(d, Interval::of({0, 1, 2})), NotAComplex);
  CHECK_THROWS_AS(restrict(d, Interval::of({0, 2})), NotAnInterval);
  d.set_block(1, 0, 1, Matrix<Rational>{{0}});
  CHECK(check_boundary(d));
  const auto c = restrict(d, Interval::of({1, 2}));
  CHECK(c.dim(2) == 1);
  CHECK(c.dim(1) == 1);
  CHECK(c.d(q, 2) == Matrix<Rational>{{1}});
  CHECK(homology(d, Interval::of({1, 2})).is_zero());
  CHECK(iso_check(homology(d, Interval::of({0, 1, 2})), graded_from_index(spec, 0)));
}

TEST_CASE("homology of hand-checked complexes", "[homology]") {
  const IntegerRing z;
  const auto h2 = homology(z, two_term(2));
  CHECK(h2.is_zero() == false);
  CHECK(h2.component(0).free_rank == 0);
  CHECK(h2.component(0).torsion == std::vector<Integer>{2});
  CHECK(h2.rank(1) == 0);
  CHECK(homology(z, two_term(1)).is_zero());
  CHECK(homology(z, two_term(-1)).is_zero());
  const auto h0 = homology(z, two_term(0));
  CHECK(iso_check(h0, graded_from_ranks(RingSpec::integers(), {{0, 1}, {1, 1}})));
  // the same complexes over fields
  const PrimeField f2(2), f3(3);
  ChainComplex<PrimeField> c;
  c.lo = -1;
  c.hi = 2;
  c.ranks = {{0, 1}, {1, 1}};
  c.differential[1] = Matrix<std::int64_t>{{0}};
  CHECK(homology(f2, c).rank(0) == 1);
  c.differential[1] = Matrix<std::int64_t>{{1}};
  CHECK(homology(f3, c).is_zero());
}

TEST_CASE("integer homology agrees with counted GF(p) Betti numbers", "[homology][property]") {
  Rng rng(29);
  for (int t = 0; t < 120; ++t) {
    const auto c = random_integer_complex(rng);
    REQUIRE(is_complex(IntegerRing{}, c));
    const auto h = homology(IntegerRing{}, c);
    for (std::int64_t p : {2, 3, 5}) {
      for (int n = 0; n <= 3; ++n) {
        // universal coefficients: torsion of H_n and H_{n-1} divisible by p both count
        std::size_t expected = h.rank(n);
        for (const auto& d : h.component(n).torsion) expected += (d % p == 0);
        for (const auto& d : h.component(n - 1).torsion) expected += (d % p == 0);
        INFO("trial " << t << " p " << p << " degree " << n);
        CHECK(counted_betti(c, n, p) == expected);
      }
    }
  }
}

TEST_CASE("canonical injections and projections compose as expected", "[block_map][property]") {
  Rng rng(31);
  const PrimeField f(3);
  for (int t = 0; t < 40; ++t) {
    const auto gt = random_relation(rng, 4, 0.4);
    const auto poset = to_poset(gt);
    std::vector<GradedModule> summands;
    std::uniform_int_distribution<std::size_t> rk(0, 2);
    for (std::size_t q = 0; q < 4; ++q)
      summands.push_back(graded_from_ranks(f.spec(), {{0, rk(rng)}, {1, rk(rng)}}));
    const auto d = random_complex(rng, f, poset, summands, false);
    for (const auto& pair : poset.adjacent_tuples(2)) {
      const Interval I = pair[0], J = pair[1], IJ = I | J;
      for (int n = -1; n <= 2; ++n) {
        const auto inc_i = inclusion_matrix(d, I, IJ, n);
        const auto proj_j = projection_matrix(d, IJ, J, n);
        const auto proj_i = projection_matrix(d, IJ, I, n);
        CHECK(multiply(f, inc_i, proj_i) == identity(f, interval_rank(d, I, n)));
        CHECK(is_zero(f, multiply(f, inc_i, proj_j)));
        // injection and projection commute with the differentials
        const auto cI = restrict(d, I), cJ = restrict(d, J), cIJ = restrict(d, IJ);
        CHECK(multiply(f, inc_i, cIJ.d(f, n)) ==
              multiply(f, cI.d(f, n), inclusion_matrix(d, I, IJ, n - 1)));
        CHECK(multiply(f, cIJ.d(f, n), projection_matrix(d, IJ, J, n - 1)) ==
              multiply(f, proj_j, cJ.d(f, n)));
        if (poset.noncomparable(I, J)) {
          // the projection onto I of the injection of J vanishes both ways
          CHECK(is_zero(f, multiply(f, inclusion_matrix(d, J, IJ, n), proj_i)));
        }
      }
    }
  }
}
