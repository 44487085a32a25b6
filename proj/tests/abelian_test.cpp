#include <gtest/gtest.h>

#include <random>

#include "largeness/abelian.hpp"
#include "largeness/presentation.hpp"

namespace largeness {
namespace {

IntMatrix mat(std::size_t r, std::size_t c, std::vector<long long> e) {
  std::vector<Integer> v(e.begin(), e.end());
  return IntMatrix(r, c, std::move(v));
}

// Cofactor expansion, for desk-sized oracles.
Integer cofactor_det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Integer d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j) == 0) continue;
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, kk = 0; k < n; ++k)
        if (k != j) minor(i - 1, kk++) = m(i, k);
    Integer term = m(0, j) * cofactor_det(minor);
    d += j % 2 == 0 ? term : Integer(-term);
  }
  return d;
}

// gcd of all k x k minors (the k-th determinantal divisor).
Integer determinantal_divisor(const IntMatrix& m, std::size_t k) {
  Integer g = 0;
  std::vector<std::size_t> rows, cols;
  auto for_subsets = [](std::size_t n, std::size_t k, auto&& f) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) s.push_back(i);
      f(s);
    }
  };
  for_subsets(m.rows(), k, [&](const std::vector<std::size_t>& rs) {
    for_subsets(m.cols(), k, [&](const std::vector<std::size_t>& cs) {
      IntMatrix sub(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(rs[i], cs[j]);
      g = gcd_int(g, cofactor_det(sub));
    });
  });
  return g;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> k(-2, 2);
  for (int step = 0; step < 6; ++step) {
    std::size_t a = idx(rng), b = idx(rng);
    if (a != b) u.add_row(a, b, k(rng));
  }
  return u;
}

void expect_valid_smith(const IntMatrix& m, const SmithDecomposition& s) {
  EXPECT_EQ(s.U * m * s.V, s.D);
  EXPECT_EQ(abs_int(cofactor_det(s.U)), 1);
  EXPECT_EQ(abs_int(cofactor_det(s.V)), 1);
  for (std::size_t i = 0; i < s.D.rows(); ++i)
    for (std::size_t j = 0; j < s.D.cols(); ++j)
      if (i != j) {
        EXPECT_EQ(s.D(i, j), 0);
      }
  auto d = s.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_GE(d[i], 0);
    if (i + 1 < d.size() && d[i] != 0) {
      EXPECT_EQ(d[i + 1] % d[i], 0);
    }
    if (d[i] == 0 && i + 1 < d.size()) {
      EXPECT_EQ(d[i + 1], 0);
    }
  }
}

TEST(ExponentMatrix, Examples) {
  EXPECT_EQ(exponent_matrix(parse_presentation("<a,b | a b a^-1 b^-1>")), mat(2, 1, {0, 0}));
  EXPECT_EQ(exponent_matrix(parse_presentation("<x,y | x y x^-1 y^-2>")), mat(2, 1, {0, -1}));
  EXPECT_EQ(exponent_matrix(parse_presentation("<x,y | x y x y^-1 x^-1 y^-1>")), mat(2, 1, {1, -1}));
}

TEST(SmithNormalForm, Examples) {
  auto s = smith_normal_form(mat(2, 2, {2, 0, 0, 3}));
  EXPECT_EQ(s.D, mat(2, 2, {1, 0, 0, 6}));
  expect_valid_smith(mat(2, 2, {2, 0, 0, 3}), s);

  auto z = smith_normal_form(IntMatrix(2, 3));
  EXPECT_TRUE(z.D.is_zero());

  auto id = smith_normal_form(IntMatrix::identity(3));
  EXPECT_EQ(id.D, IntMatrix::identity(3));
}

TEST(SmithNormalForm, MatchesDeterminantalDivisors) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    IntMatrix m = random_matrix(rng, r, c, trial % 2 ? 9 : 3);
    auto s = smith_normal_form(m);
    expect_valid_smith(m, s);
    // d_1 ... d_k = gcd of k x k minors
    Integer prod = 1;
    auto d = s.diagonal();
    for (std::size_t k = 1; k <= d.size(); ++k) {
      prod *= d[k - 1];
      EXPECT_EQ(prod, determinantal_divisor(m, k)) << "trial " << trial << " k " << k;
    }
    EXPECT_EQ(rank(m), s.rank());
  }
}

TEST(SmithNormalForm, InvariantUnderUnimodularChange) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    IntMatrix m = random_matrix(rng, 3, 4, 6);
    IntMatrix m2 = random_unimodular(rng, 3) * m * random_unimodular(rng, 4);
    EXPECT_EQ(smith_normal_form(m).D, smith_normal_form(m2).D);
  }
}

TEST(Abelianization, Examples) {
  EXPECT_EQ(abelianization(parse_presentation("<x,y | x y x^-1 y^-2>")), (AbelianInvariants{1, {}}));
  EXPECT_EQ(abelianization(parse_presentation("<x,y | x y^2 x^-1 y^-4>")), (AbelianInvariants{1, {2}}));
  EXPECT_EQ(abelianization(parse_presentation("<a,b | a b a^-1 b^-1>")), (AbelianInvariants{2, {}}));
  EXPECT_TRUE(abelianization(parse_presentation("<a,b | a b a^-1 b^-1>")).is_free_rank_two());
  EXPECT_EQ(abelianization(parse_presentation("<a,b | a^2, b^3>")), (AbelianInvariants{0, {6}}));
  EXPECT_EQ(abelianization(parse_presentation("<a,b | a^2, b^4>")), (AbelianInvariants{0, {2, 4}}));
  EXPECT_EQ(abelianization(parse_presentation("<a,b,c | >")), (AbelianInvariants{3, {}}));
}

TEST(HomToZBasis, Examples) {
  auto z2 = hom_to_Z_basis(parse_presentation("<a,b | a b a^-1 b^-1>"));
  ASSERT_EQ(z2.size(), 2u);
  EXPECT_EQ(z2[0].values, (std::vector<Integer>{1, 0}));
  EXPECT_EQ(z2[1].values, (std::vector<Integer>{0, 1}));

  auto bs = hom_to_Z_basis(parse_presentation("<x,y | x y x^-1 y^-2>"));
  ASSERT_EQ(bs.size(), 1u);
  EXPECT_EQ(bs[0].values, (std::vector<Integer>{1, 0}));

  auto tr = hom_to_Z_basis(parse_presentation("<x,y | x y x y^-1 x^-1 y^-1>"));
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_EQ(tr[0].values, (std::vector<Integer>{1, 1}));

  EXPECT_THROW(hom_to_Z_basis(parse_presentation("<a | a^3>")), NoSurjectionToZ);
}

TEST(HomToZBasis, AnnihilatesRelatorsAndSpansTheDual) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    Presentation p;
    p.generators = numbered_names("x", n, 0);
    for (int j = 0; j < 1 + trial % 2; ++j) {
      Word r;
      for (int g = 0; g < n; ++g) r *= Word::generator(g, d(rng));
      p.relators.push_back(r);
    }
    auto inv = abelianization(p);
    if (inv.betti == 0) continue;
    auto basis = hom_to_Z_basis(p);
    ASSERT_EQ(static_cast<int>(basis.size()), inv.betti);
    IntMatrix b(basis.size(), static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (const auto& r : p.relators) EXPECT_EQ(basis[i](r), 0);
      for (int g = 0; g < n; ++g) b(i, static_cast<std::size_t>(g)) = basis[i].values[static_cast<std::size_t>(g)];
    }
    // The rows span a saturated lattice: the gcd of the maximal minors is 1.
    EXPECT_EQ(determinantal_divisor(b, basis.size()), 1);
    EXPECT_EQ(hom_to_Z_basis(p)[0].values, basis[0].values);
  }
}

TEST(ImageSpanRank, Examples) {
  auto p = parse_presentation("<x,y,t | t x t^-1 x^-1, t y t^-1 x^-1 y^-1>");
  std::vector<Word> tx{parse_word("t", p.generators), parse_word("x", p.generators)};
  auto s1 = image_span_rank(p, tx);
  EXPECT_EQ(s1.rank, 1u);
  EXPECT_TRUE(s1.infinite_index);

  auto q = parse_presentation("<x,y | x^2 y x^-2 y^-1>");
  std::vector<Word> x2y{parse_word("x^2", q.generators), parse_word("y", q.generators)};
  auto s2 = image_span_rank(q, x2y);
  EXPECT_EQ(s2.rank, 2u);
  EXPECT_FALSE(s2.infinite_index);

  auto s3 = image_span_rank(q, std::vector<Word>{});
  EXPECT_EQ(s3.rank, 0u);
  EXPECT_TRUE(s3.infinite_index);
}

}  // namespace
}  // namespace largeness
