#include <gtest/gtest.h>

#include <array>

#include "cds/gf_matrix.hpp"
#include "support.hpp"

using namespace cds;
using cds::testkit::Rng;

namespace {

GfMatrix window(std::size_t first, std::size_t width, std::size_t total) {
  GfMatrix m(2, width, total);
  for (std::size_t j = 0; j < width; ++j) m.at(j, (first + j) % total) = 1;
  return m;
}

}  // namespace

TEST(Field, Primes) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(65521));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(9));
  EXPECT_EQ(next_prime_above(4), 5u);
  EXPECT_EQ(next_prime_above(5), 7u);
  EXPECT_EQ(next_prime_above(1), 2u);
  EXPECT_EQ(next_prime_above(0), 2u);
}

TEST(Field, InverseAndReduce) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 65521u}) {
    for (Residue a = 1; a < std::min<std::uint32_t>(p, 50); ++a) EXPECT_EQ(gf::mul(a, gf::inv(a, p), p), 1u);
  }
  EXPECT_EQ(gf::reduce(-1, 5), 4u);
  EXPECT_EQ(gf::reduce(12, 5), 2u);
}

TEST(GfMatrix, RejectsBadConstruction) {
  EXPECT_THROW(GfMatrix(4, 1, 1), DimensionError);
  EXPECT_THROW(GfMatrix(65537, 1, 1), DimensionError);
  EXPECT_THROW(GfMatrix(3, 1, 2, {0, 3}), DimensionError);
  EXPECT_THROW(GfMatrix(3, 2, 2, {0, 1, 2}), DimensionError);
  EXPECT_THROW(vstack(GfMatrix(2, 1, 2), GfMatrix(3, 1, 2)), DimensionError);
  EXPECT_THROW(vstack(GfMatrix(2, 1, 2), GfMatrix(2, 1, 3)), DimensionError);
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(GfMatrix::identity(2, 3)), 3u);
  EXPECT_EQ(rank(GfMatrix::from_rows(2, {{1, 1}, {1, 1}})), 1u);
  EXPECT_EQ(rank(GfMatrix::from_rows(5, {{1, 2}, {2, 4}, {0, 1}})), 2u);
}

TEST(Rank, EmptyMatricesHaveRankZero) {
  EXPECT_EQ(rank(GfMatrix(3, 0, 4)), 0u);
  EXPECT_EQ(rank(GfMatrix(3, 4, 0)), 0u);
  EXPECT_EQ(left_kernel(GfMatrix(3, 4, 0)).rows(), 4u);
}

TEST(Rref, Examples) {
  const auto z = rref(GfMatrix(3, 2, 3));
  EXPECT_EQ(z.reduced, GfMatrix(3, 2, 3));
  EXPECT_TRUE(z.pivots.empty());

  const auto d = rref(GfMatrix::from_rows(5, {{2, 0}, {0, 3}}));
  EXPECT_EQ(d.reduced, GfMatrix::identity(5, 2));
  EXPECT_EQ(d.pivots, (std::vector<std::size_t>{0, 1}));

  const auto h = rref(GfMatrix::from_rows(2, {{1, 1, 0}, {1, 1, 1}}));
  EXPECT_EQ(h.reduced, GfMatrix::from_rows(2, {{1, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ(h.pivots, (std::vector<std::size_t>{0, 2}));
}

TEST(LeftKernel, Examples) {
  EXPECT_EQ(left_kernel(GfMatrix::identity(5, 3)).rows(), 0u);
  EXPECT_EQ(left_kernel(GfMatrix::from_rows(2, {{1, 1}, {1, 1}})), GfMatrix::from_rows(2, {{1, 1}}));

  const GfMatrix m = GfMatrix::from_rows(3, {{1, 0}, {2, 0}, {0, 1}});
  const GfMatrix k = left_kernel(m);
  ASSERT_EQ(k.rows(), 1u);
  const GfMatrix expected = GfMatrix::from_rows(3, {{1, 1, 0}});
  EXPECT_EQ(rank(vstack(k, expected)), 1u);  // same row space
}

TEST(Intersection, Examples) {
  const GfMatrix full = GfMatrix::from_rows(3, {{1, 2}, {0, 1}});
  EXPECT_EQ(rowspace_intersection_dim(full, full), 2u);
  EXPECT_EQ(rowspace_intersection_dim(GfMatrix::from_rows(2, {{1, 0}}), GfMatrix::from_rows(2, {{0, 1}})), 0u);
  EXPECT_EQ(rowspace_intersection_dim(window(0, 5, 9), window(1, 5, 9)), 4u);
}

TEST(Intersection, BasisExamples) {
  const GfMatrix a = GfMatrix::from_rows(5, {{1, 2, 3}, {0, 1, 4}});
  const GfMatrix same = rowspace_intersection_basis(a, a);
  EXPECT_EQ(same.rows(), 2u);
  EXPECT_EQ(rank(vstack(same, a)), 2u);

  EXPECT_EQ(rowspace_intersection_basis(GfMatrix::from_rows(2, {{1, 0}}), GfMatrix::from_rows(2, {{0, 1}})).rows(), 0u);

  const GfMatrix common = rowspace_intersection_basis(window(0, 5, 9), window(1, 5, 9));
  EXPECT_EQ(common, rref(window(1, 4, 9)).reduced);
}

TEST(Properties, RankMatchesBruteForce) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t p = std::array<std::uint32_t, 3>{2, 3, 5}[trial % 3];
    const std::size_t r = rng() % 5, c = rng() % 5;
    const GfMatrix m = testkit::random_matrix(rng, p, r, c);
    const auto red = rref(m);
    ASSERT_EQ(rank(m), testkit::brute_force_rank(m)) << m;
    EXPECT_EQ(rank(red.reduced), rank(m));
    EXPECT_EQ(rref(red.reduced).reduced, red.reduced);
    EXPECT_LE(rank(m), std::min(r, c));
  }
}

TEST(Properties, KernelAndIntersection) {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t p = std::array<std::uint32_t, 3>{2, 3, 5}[trial % 3];
    const std::size_t c = 1 + rng() % 4;
    const GfMatrix a = testkit::random_matrix(rng, p, rng() % 4, c);
    const GfMatrix b = testkit::random_matrix(rng, p, rng() % 4, c);

    const GfMatrix k = left_kernel(a);
    EXPECT_EQ(k.rows(), a.rows() - rank(a));
    EXPECT_EQ(rank(k), k.rows());
    for (std::size_t i = 0; i < k.rows(); ++i) {
      for (Residue x : row_times(k.row(i), a)) EXPECT_EQ(x, 0u);
    }

    EXPECT_LE(rank(vstack(a, b)), rank(a) + rank(b));
    EXPECT_EQ(rowspace_intersection_dim(a, b), rowspace_intersection_dim(b, a));
    const GfMatrix basis = rowspace_intersection_basis(a, b);
    EXPECT_EQ(basis.rows(), rowspace_intersection_dim(a, b));
    for (std::size_t i = 0; i < basis.rows(); ++i) {
      EXPECT_TRUE(in_rowspace(basis.row(i), a));
      EXPECT_TRUE(in_rowspace(basis.row(i), b));
    }
  }
}
