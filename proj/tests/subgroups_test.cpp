#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "largeness/abelian.hpp"
#include "largeness/coset_table.hpp"
#include "largeness/low_index.hpp"
#include "largeness/presentation.hpp"
#include "largeness/rewrite.hpp"
#include "largeness/stallings.hpp"
#include "test_util.hpp"

namespace largeness {
namespace {

using testing::random_word;
using testing::w;

const Presentation free2 = parse_presentation("<a,b | >");
const Presentation z2 = parse_presentation("<a,b | a b a^-1 b^-1>");
const Presentation s3 = parse_presentation("<a,b | a^2, b^3, a b a b>");

// ---- coset enumeration ----

TEST(CosetEnumerate, Examples) {
  auto t1 = coset_enumerate(parse_presentation("<a | a^3>"), {}, 10);
  EXPECT_EQ(t1.degree, 3);
  EXPECT_TRUE(is_relator_closed(t1, parse_presentation("<a | a^3>")));

  auto t2 = coset_enumerate(s3, {}, 12);
  EXPECT_EQ(t2.degree, 6);
  EXPECT_TRUE(is_relator_closed(t2, s3));

  std::vector<Word> sub{w({1})};
  EXPECT_THROW(coset_enumerate(z2, sub, 100), BoundExceeded);
}

TEST(CosetEnumerate, SubgroupIndices) {
  std::vector<Word> a{w({1})}, b{w({2})};
  EXPECT_EQ(coset_enumerate(s3, a, 12).degree, 3);
  EXPECT_EQ(coset_enumerate(s3, b, 12).degree, 2);
  // A_5 = <a, b | a^2, b^3, (ab)^5>
  auto a5 = parse_presentation("<a,b | a^2, b^3, a b a b a b a b a b>");
  auto t = coset_enumerate(a5, {}, 200);
  EXPECT_EQ(t.degree, 60);
  EXPECT_TRUE(is_relator_closed(t, a5));
  EXPECT_EQ(coset_enumerate(a5, b, 100).degree, 20);
  // subgroup generators fix the base coset
  auto tb = coset_enumerate(a5, b, 100);
  EXPECT_EQ(tb.trace(0, w({2})), 0);
  EXPECT_THROW(coset_enumerate(a5, {}, 59), BoundExceeded);
}

// ---- Reidemeister-Schreier ----

CosetTable parity_table(int gen, int rank) {
  CosetTable t{2, std::vector<std::vector<int>>(static_cast<std::size_t>(rank), {0, 1})};
  t.action[static_cast<std::size_t>(gen)] = {1, 0};
  return t;
}

TEST(ReidemeisterSchreier, Counts) {
  auto p = parse_presentation("<x,y | x^2 y x^-2 y^-1>");
  auto rw = reidemeister_schreier(p, parity_table(0, 2));
  EXPECT_EQ(rw.presentation.rank(), 3);
  EXPECT_EQ(rw.presentation.relators.size(), 2u);
  EXPECT_EQ(rw.presentation.generators[0], "y");

  auto z = parse_presentation("<a | >");
  CosetTable c3{3, {{1, 2, 0}}};
  auto rz = reidemeister_schreier(z, c3);
  EXPECT_EQ(rz.presentation.rank(), 1);
  EXPECT_TRUE(rz.presentation.relators.empty());
  EXPECT_EQ(rz.in_parent[0], Word::generator(0, 3));

  auto rf = reidemeister_schreier(parse_presentation("<x,y | >"), parity_table(0, 2));
  EXPECT_EQ(rf.presentation.rank(), 3);
  EXPECT_TRUE(rf.presentation.relators.empty());
}

TEST(ReidemeisterSchreier, IncompleteTableIsAnError) {
  CosetTable t{2, {{1, -1}, {0, 1}}};
  EXPECT_THROW(reidemeister_schreier(free2, t), std::invalid_argument);
}

TEST(ReidemeisterSchreier, SubgroupsOfKnownGroups) {
  // every finite-index subgroup of Z^2 is Z^2
  for (const auto& t : low_index_subgroups(z2, 5)) {
    auto rw = reidemeister_schreier(z2, t);
    EXPECT_EQ(rw.presentation.rank(), t.degree + 1);
    EXPECT_EQ(rw.presentation.relators.size(), static_cast<std::size_t>(t.degree));
    EXPECT_TRUE(abelianization(rw.presentation).is_free_rank_two());
    EXPECT_TRUE(abelianization(simplify(rw.presentation)).is_free_rank_two());
  }
  // subgroups of S_3 of index 2, 3, 6 are Z/3, Z/2, 1
  std::map<int, AbelianInvariants> expected{{1, {0, {2}}}, {2, {0, {3}}}, {3, {0, {2}}}, {6, {0, {}}}};
  for (const auto& t : low_index_subgroups(s3, 6))
    EXPECT_EQ(abelianization(reidemeister_schreier(s3, t).presentation), expected.at(t.degree));
}

TEST(ReidemeisterSchreier, GeneratorsLieInTheSubgroupAndRewriteBack) {
  auto p = parse_presentation("<x,y | x^2 y x^-2 y^-1>");
  std::mt19937_64 rng(41);
  for (const auto& t : low_index_subgroups(p, 4)) {
    auto rw = reidemeister_schreier(p, t);
    for (std::size_t i = 0; i < rw.in_parent.size(); ++i) {
      EXPECT_EQ(t.trace(0, rw.in_parent[i]), 0);
      EXPECT_EQ(rewrite_word(t, rw, rw.in_parent[i]), Word::generator(static_cast<int>(i)));
    }
    // substituting back the parent words reproduces the element
    for (int trial = 0; trial < 20; ++trial) {
      Word x = random_word(rng, 2, 8);
      Word back = rw.transversal.rep[static_cast<std::size_t>(t.trace(0, x))];
      Word h = x * back.inverse();
      EXPECT_EQ(substitute(rewrite_word(t, rw, h), rw.in_parent), h);
    }
  }
}

TEST(ReidemeisterSchreier, BettiNumberDoesNotDrop) {
  std::vector<Presentation> groups{parse_presentation("<x,y | x^2 y x^-2 y^-1>"),
                                   parse_presentation("<x,y | x y x^-1 y^-2>"),
                                   parse_presentation("<x,y | x y x y^-1 x^-1 y^-1>"), s3};
  for (const auto& p : groups) {
    int b = abelianization(p).betti;
    for (const auto& t : low_index_subgroups(p, 4)) {
      auto rw = reidemeister_schreier(p, t);
      auto q = simplify(rw.presentation);
      EXPECT_GE(abelianization(q).betti, b);
      EXPECT_EQ(abelianization(q), abelianization(rw.presentation));
      EXPECT_GE(q.deficiency(), rw.presentation.deficiency());
    }
  }
}

TEST(Simplify, Examples) {
  auto p = parse_presentation("<a,b,c | c a^-1 b^-1, a b a^-1 b^-1>");
  auto q = simplify(p);
  EXPECT_EQ(q.rank(), 2);
  EXPECT_EQ(q.relators.size(), 1u);
  EXPECT_EQ(q.deficiency(), p.deficiency());
  auto r = simplify(parse_presentation("<a,b | a a^-1, b a b^-1>"));
  EXPECT_EQ(r.rank(), 1);
  EXPECT_TRUE(r.relators.empty());
  EXPECT_EQ(simplify(z2), z2);
}

// ---- low-index subgroups ----

// Brute force: all transitive pairs of permutations of {0..n-1}; a class is
// the set of tables obtained by re-rooting.
std::vector<int> brute_force_class_counts(int max_n) {
  std::vector<int> counts;
  for (int n = 1; n <= max_n; ++n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    std::set<std::set<CosetTable>> classes;
    for (const auto& p1 : perms)
      for (const auto& p2 : perms) {
        CosetTable t{n, {p1, p2}};
        std::set<CosetTable> cls;
        try {
          for (int root = 0; root < n; ++root) cls.insert(standardize(t, root));
        } catch (const std::invalid_argument&) {
          continue;  // not transitive
        }
        classes.insert(cls);
      }
    counts.push_back(static_cast<int>(classes.size()));
  }
  return counts;
}

std::vector<int> class_counts(const std::vector<CosetTable>& ts, int max_n) {
  std::vector<int> c(static_cast<std::size_t>(max_n));
  for (const auto& t : ts) ++c[static_cast<std::size_t>(t.degree - 1)];
  return c;
}

TEST(LowIndex, FreeGroupClassCounts) {
  auto ts = low_index_subgroups(free2, 3);
  EXPECT_EQ(class_counts(ts, 3), (std::vector<int>{1, 3, 7}));
  EXPECT_EQ(class_counts(low_index_subgroups(free2, 4), 4), brute_force_class_counts(4));
}

TEST(LowIndex, Examples) {
  EXPECT_EQ(class_counts(low_index_subgroups(parse_presentation("<a | >"), 4), 4), (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(class_counts(low_index_subgroups(z2, 2), 2), (std::vector<int>{1, 3}));
  // S_3: one class each of index 1, 2, 3, 6
  EXPECT_EQ(class_counts(low_index_subgroups(s3, 6), 6), (std::vector<int>{1, 1, 1, 0, 0, 1}));
}

// a_1 = 1, a_n = n (n!) - sum_{i<n} (n-i)! a_i counts index-n subgroups of F_2.
TEST(LowIndex, HallRecursionTotals) {
  std::vector<long long> fact{1}, hall;
  for (int n = 1; n <= 5; ++n) fact.push_back(fact.back() * n);
  for (int n = 1; n <= 5; ++n) {
    long long a = n * fact[static_cast<std::size_t>(n)];
    for (int i = 1; i < n; ++i) a -= fact[static_cast<std::size_t>(n - i)] * hall[static_cast<std::size_t>(i - 1)];
    hall.push_back(a);
  }
  ASSERT_EQ(hall, (std::vector<long long>{1, 3, 13, 71, 461}));

  std::vector<long long> totals(5);
  for (const auto& t : low_index_subgroups(free2, 5)) totals[static_cast<std::size_t>(t.degree - 1)] += conjugacy_class_size(t);
  EXPECT_EQ(totals, hall);
}

TEST(LowIndex, TablesAreCanonicalAndRelatorClosed) {
  std::vector<Presentation> groups{z2, s3, parse_presentation("<x,y | x y x^-1 y^-2>"),
                                   parse_presentation("<x,y | x y x y^-1 x^-1 y^-1>")};
  for (const auto& p : groups) {
    auto ts = low_index_subgroups(p, 5);
    std::set<CosetTable> seen;
    for (const auto& t : ts) {
      EXPECT_TRUE(is_relator_closed(t, p));
      EXPECT_EQ(standardize(t), t);
      for (int root = 0; root < t.degree; ++root) EXPECT_FALSE(standardize(t, root) < t && false);
      // no two outputs are conjugate
      for (int root = 0; root < t.degree; ++root) EXPECT_FALSE(seen.count(standardize(t, root)));
      seen.insert(t);
    }
    EXPECT_TRUE(std::is_sorted(ts.begin(), ts.end(), [](const CosetTable& a, const CosetTable& b) {
      return a.degree != b.degree ? a.degree < b.degree : a.action < b.action;
    }));
  }
}

TEST(LowIndex, ThreadCountDoesNotChangeOutput) {
  auto p = parse_presentation("<x,y | x y x y^-1 x^-1 y^-1>");
  auto single = low_index_subgroups(p, 6, 1);
  EXPECT_EQ(low_index_subgroups(p, 6, 4), single);
  EXPECT_EQ(low_index_subgroups(free2, 4, 3), low_index_subgroups(free2, 4, 1));
}

TEST(LowIndex, IndexWindowAndNodeLimit) {
  LowIndexOptions opt;
  opt.max_index = 4;
  opt.min_index = 4;
  auto only4 = low_index_subgroups(free2, opt);
  auto all = low_index_subgroups(free2, 4);
  std::vector<CosetTable> expected;
  for (const auto& t : all)
    if (t.degree == 4) expected.push_back(t);
  EXPECT_EQ(only4, expected);
  opt.node_limit = 10;
  EXPECT_THROW(low_index_subgroups(free2, opt), BoundExceeded);
}

TEST(LowIndex, NodeLimitIndependentOfThreads) {
  auto throws = [](std::size_t limit, unsigned threads) {
    LowIndexOptions opt;
    opt.max_index = 5;
    opt.node_limit = limit;
    opt.threads = threads;
    try {
      low_index_subgroups(free2, opt);
      return false;
    } catch (const BoundExceeded&) {
      return true;
    }
  };
  bool saw_throw = false, saw_pass = false;
  for (std::size_t limit : {50, 200, 500, 1000, 2000, 5000, 20000, 100000}) {
    bool serial = throws(limit, 1);
    saw_throw = saw_throw || serial;
    saw_pass = saw_pass || !serial;
    EXPECT_EQ(throws(limit, 3), serial) << limit;
    EXPECT_EQ(throws(limit, 8), serial) << limit;
  }
  EXPECT_TRUE(saw_throw && saw_pass);
}

// ---- Stallings graphs ----

TEST(Fold, Examples) {
  auto g1 = fold({w({1, 1}), w({1, 1, 1})});
  EXPECT_EQ(g1.vertices, 1);
  EXPECT_EQ(g1.edges, (std::vector<Edge>{{0, 0, 0}}));

  auto g2 = fold({w({1}), w({2})});
  EXPECT_EQ(g2.vertices, 1);
  EXPECT_EQ(g2.edges.size(), 2u);

  auto g3 = fold({w({1, 1}), w({2}), w({1, 2, -1})});
  EXPECT_EQ(g3.vertices, 2);
  EXPECT_TRUE(is_covering(g3, 2));
  EXPECT_EQ(sg_index_and_basis(g3, 2).index, 2);
}

TEST(Fold, ConfluentUnderReordering) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Word> gens;
    for (int k = 0; k < 3; ++k) gens.push_back(random_word(rng, 2, 1 + (trial + k) % 6));
    auto g = fold(gens);
    for (int shuffle = 0; shuffle < 4; ++shuffle) {
      std::shuffle(gens.begin(), gens.end(), rng);
      EXPECT_EQ(fold(gens), g);
    }
    for (const auto& s : gens) EXPECT_TRUE(sg_membership(g, s));
    // folded: no repeated (vertex, label) in either direction
    std::set<std::pair<int, int>> out, in;
    for (const auto& e : g.edges) {
      EXPECT_TRUE(out.insert({e.from, e.label}).second);
      EXPECT_TRUE(in.insert({e.to, e.label}).second);
    }
  }
}

TEST(SgMembership, Examples) {
  auto a = fold({w({1})});
  EXPECT_TRUE(sg_membership(a, Word::generator(0, 5)));
  EXPECT_FALSE(sg_membership(a, w({2})));
  auto g = fold({w({1, 1}), w({2}), w({1, 2, -1})});
  EXPECT_FALSE(sg_membership(g, w({1, 2})));
  EXPECT_FALSE(sg_membership(g, w({2, 1, 2})));
  EXPECT_TRUE(sg_membership(g, w({1, 2, 1})));  // (a b a^-1) a^2
}

TEST(SgIndexAndBasis, Examples) {
  auto whole = sg_index_and_basis(fold({w({1}), w({2})}), 2);
  EXPECT_EQ(whole.index, 1);
  EXPECT_EQ(whole.basis, (std::vector<Word>{w({1}), w({2})}));

  auto g = fold({w({1, 1}), w({2}), w({1, 2, -1})});
  auto ib = sg_index_and_basis(g, 2);
  EXPECT_EQ(ib.index, 2);
  EXPECT_EQ(ib.basis.size(), 3u);
  for (const auto& b : ib.basis) EXPECT_TRUE(sg_membership(g, b));
  EXPECT_EQ(fold(ib.basis), g);

  auto cyc = sg_index_and_basis(fold({w({1})}), 2);
  EXPECT_FALSE(cyc.index.has_value());
  EXPECT_EQ(cyc.basis, (std::vector<Word>{w({1})}));
}

void expect_hall_postconditions(const Word& x, int rank) {
  auto g = hall_overgroup(x, rank);
  EXPECT_TRUE(is_covering(g, rank)) << to_string(Presentation{numbered_names("x", rank, 0), {x}});
  auto ib = sg_index_and_basis(g, rank);
  ASSERT_TRUE(ib.index.has_value());
  EXPECT_EQ(ib.basis.size(), static_cast<std::size_t>(1 + *ib.index * (rank - 1)));
  EXPECT_TRUE(sg_membership(g, x));
  EXPECT_NE(std::find(ib.basis.begin(), ib.basis.end(), x), ib.basis.end());
  EXPECT_EQ(fold(ib.basis), g);
}

TEST(HallOvergroup, Examples) {
  auto g1 = hall_overgroup(w({1}), 2);
  EXPECT_EQ(g1.vertices, 1);
  EXPECT_EQ(sg_index_and_basis(g1, 2).index, 1);

  auto g2 = hall_overgroup(w({1, 1}), 2);
  EXPECT_EQ(g2, fold({w({1, 1}), w({2}), w({1, 2, -1})}));
  expect_hall_postconditions(w({1, 1}), 2);
  expect_hall_postconditions(w({1, 2, -1, -2}), 2);
  EXPECT_THROW(hall_overgroup(Word{}, 2), std::invalid_argument);
}

TEST(HallOvergroup, RandomWords) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    int rank = 2 + trial % 2;
    expect_hall_postconditions(random_word(rng, rank, 1 + trial % 12), rank);
  }
}

}  // namespace
}  // namespace largeness
