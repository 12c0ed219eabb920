#include <gtest/gtest.h>

#include <random>

#include "medlat/rules.hpp"
#include "oracles.hpp"

using namespace medlat;

namespace {

template <class F>
void for_each_profile(const Lattice& l, std::size_t n, F f) {
  BallotIndexer idx(full_spaces(l, n), l.size());
  Ballots b;
  for (std::uint64_t k = 0; k < idx.total(); ++k) {
    idx.decode(k, b);
    f(b);
  }
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ParseError;  // sentinel: nothing thrown
}

/// z_T = join over S subset of T of random w_S, hence monotone in T.
std::vector<ElementId> random_monotone_corners(const Lattice& l, std::size_t n, std::mt19937& rng) {
  const std::size_t total = std::size_t{1} << n;
  std::vector<ElementId> w(total), z(total);
  for (auto& x : w) x = static_cast<ElementId>(rng() % l.size());
  for (Coalition t = 0; t < total; ++t) {
    ElementId acc = l.bottom();
    for (Coalition s = 0; s < total; ++s)
      if ((s & ~t) == 0) acc = l.join(acc, w[s]);
    z[corner_index_of(t, n)] = acc;
  }
  return z;
}

}  // namespace

TEST(BallotIndexer, MixedRadixVoterOneMostSignificant) {
  BallotIndexer idx({{0, 1, 2}, {5, 4}}, 6);
  EXPECT_EQ(idx.total(), 6u);
  EXPECT_EQ(idx.index(Ballots{0, 5}), 0u);
  EXPECT_EQ(idx.index(Ballots{0, 4}), 1u);
  EXPECT_EQ(idx.index(Ballots{1, 5}), 2u);
  EXPECT_EQ(idx.stride(0), 2u);
  EXPECT_EQ(idx.stride(1), 1u);
  for (std::uint64_t k = 0; k < idx.total(); ++k) EXPECT_EQ(idx.index(idx.decode(k)), k);
  EXPECT_EQ(kind_of([&] { idx.index(Ballots{0}); }), ErrorKind::ArityMismatch);
  EXPECT_EQ(kind_of([&] { idx.index(Ballots{3, 5}); }), ErrorKind::BallotOutOfSpace);
  EXPECT_EQ(kind_of([] { BallotIndexer({{0, 0}}, 2); }), ErrorKind::InvalidInput);
}

TEST(ExplicitRule, Validation) {
  auto l = share(boolean_square());
  EXPECT_EQ(kind_of([&] { ExplicitRule(l, full_spaces(*l, 2), std::vector<ElementId>(15, 0)); }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([&] { ExplicitRule(l, full_spaces(*l, 1), {0, 1, 2, 9}); }), ErrorKind::InvalidElement);
  auto cube = share(build_boolean_hypercube(3));
  EXPECT_EQ(kind_of([&] { ExplicitRule(cube, full_spaces(*cube, 7), {}); }), ErrorKind::TooLarge);
  ExplicitRule r(l, full_spaces(*l, 1), {3, 2, 1, 0});
  EXPECT_EQ(r(Ballots{1}), 2u);
  EXPECT_EQ(kind_of([&] { r(Ballots{1, 1}); }), ErrorKind::ArityMismatch);
}

TEST(Committee, EvaluationConventions) {
  auto l = share(boolean_square());
  const ElementId zero = l->id("0"), x = l->id("x"), y = l->id("y"), one = l->id("1");
  CommitteeRule empty(l, 2, {});
  EXPECT_EQ(empty(Ballots{one, one}), zero);
  CommitteeRule constant(l, 2, {{0, x}});
  EXPECT_EQ(constant(Ballots{y, y}), x);
  CommitteeRule dictator(l, 2, {{0b10, one}});
  EXPECT_EQ(dictator(Ballots{x, y}), y);
  EXPECT_EQ(kind_of([&] { CommitteeRule(l, 2, {{0b100, one}}); }), ErrorKind::ArityMismatch);
  EXPECT_EQ(kind_of([&] { dictator(Ballots{x}); }), ErrorKind::ArityMismatch);
  EXPECT_TRUE(threshold_rule(l, 3, 2).is_order_filter());
  EXPECT_TRUE(threshold_rule(l, 3, 2).constants_monotone());
  EXPECT_FALSE(CommitteeRule(l, 2, {{0b01, one}}).is_order_filter());
  EXPECT_FALSE(CommitteeRule(l, 2, {{0b01, one}, {0b11, x}}).constants_monotone());
}

TEST(ExtendedMedian, GoldenValuesOnBooleanSquare) {
  Lattice sq = boolean_square();
  const ElementId zero = sq.id("0"), x = sq.id("x"), y = sq.id("y"), one = sq.id("1");
  EXPECT_EQ(extended_median(sq, Ballots{x, x, y, y, zero}), zero);
  EXPECT_EQ(extended_median(sq, Ballots{one, one, one, one, zero}), one);
  EXPECT_EQ(extended_median(sq, Ballots{x, y, one}), one);
  EXPECT_EQ(extended_median(sq, Ballots{x, y, zero}), zero);
}

TEST(ExtendedMedian, CoordinatewiseMajorityOnCubes) {
  for (std::size_t k = 1; k <= 3; ++k) {
    Lattice l = build_boolean_hypercube(k);
    for (std::size_t n : {1u, 3u}) {
      CommitteeRule r = extended_median_rule(share(l), n);
      for_each_profile(l, n, [&](const Ballots& b) {
        std::vector<std::uint32_t> masks(b.begin(), b.end());
        EXPECT_EQ(extended_median(l, b), oracle::cube_majority(masks, k));
        EXPECT_EQ(r(b), extended_median(l, b));
      });
    }
  }
}

TEST(ExtendedMedian, OrderStatisticOnChains) {
  Lattice c = build_chain(4);
  for (std::size_t n = 1; n <= 4; ++n)
    for_each_profile(c, n, [&](const Ballots& b) {
      Ballots s(b);
      std::sort(s.begin(), s.end());
      EXPECT_EQ(extended_median(c, b), s[n - (n / 2 + 1)]);
    });
}

TEST(Quota, SizeIndexedConstants) {
  auto l = share(build_chain(3));
  CommitteeRule q = quota_rule(l, 2, {0, 1, 2});
  EXPECT_EQ(q.terms().size(), 4u);
  EXPECT_EQ(q(Ballots{2, 2}), 2u);
  EXPECT_EQ(q(Ballots{2, 0}), 1u);
  EXPECT_EQ(q(Ballots{0, 0}), 0u);
  EXPECT_EQ(kind_of([&] { quota_rule(l, 2, {0, 1}); }), ErrorKind::ArityMismatch);
}

TEST(Corners, BinaryOrder) {
  Lattice sq = boolean_square();
  EXPECT_EQ(corner_ballots(sq, 2, 0b10), (Ballots{sq.top(), sq.bottom()}));
  EXPECT_EQ(corner_index_of(0b01, 2), 0b10u);
  EXPECT_EQ(corner_index_of(0b011, 3), 0b110u);
  auto l = share(sq);
  auto proj = projection_rule(l, 2, 0);
  EXPECT_EQ(corners(proj), (std::vector<ElementId>{0, 0, 3, 3}));
  ExplicitRule narrow(l, {{1, 2}, {0, 3}}, {0, 1, 2, 3});
  EXPECT_EQ(kind_of([&] { corners(narrow); }), ErrorKind::CornerNotInBallotSpace);
}

TEST(MedianTree, CanonicalShapeAndPrinting) {
  auto l = share(boolean_square());
  MedianTree t = build_canonical_median_tree(l, {0, 1, 2, 3}, 2);
  EXPECT_EQ(to_string(t), "mu(mu(0,x2,x),x1,mu(y,x2,1))");
  EXPECT_EQ(t.leaf_constants(), (std::vector<ElementId>{0, 1, 2, 3}));
  EXPECT_EQ(kind_of([&] { build_canonical_median_tree(l, {0, 1, 2}, 2); }), ErrorKind::ArityMismatch);
}

TEST(MedianTree, Validation) {
  auto l = share(build_chain(2));
  using K = MedianTree::Kind;
  std::vector<MedianTree::Node> bad_leaf{{K::Ballot, 0, 0, 0, 3, 0}};
  EXPECT_EQ(kind_of([&] { MedianTree(l, 2, bad_leaf, 0); }), ErrorKind::BadLeafIndex);
  std::vector<MedianTree::Node> cyclic{{K::Const, 0, 0, 0, 0, 0}, {K::Median, 0, 1, 0, 0, 0}};
  EXPECT_EQ(kind_of([&] { MedianTree(l, 1, cyclic, 1); }), ErrorKind::MalformedTree);
  EXPECT_EQ(kind_of([&] { MedianTree(l, 1, bad_leaf, 4); }), ErrorKind::MalformedTree);
}

// For monotone corner data the canonical tree reproduces the corners and
// agrees everywhere with the committee built from the same data.
TEST(Properties, TreeCommitteeRoundTrip) {
  std::mt19937 rng(7);
  std::vector<Lattice> ls{boolean_square(), build_chain(4), build_product(build_chain(2), build_chain(3))};
  for (const auto& base : ls) {
    auto l = share(base);
    for (std::size_t n = 1; n <= 3; ++n)
      for (int trial = 0; trial < 10; ++trial) {
        auto z = random_monotone_corners(*l, n, rng);
        MedianTree t = build_canonical_median_tree(l, z, n);
        EXPECT_EQ(corners(t), z);
        CommitteeRule c = tree_to_committee(t);
        EXPECT_TRUE(c.constants_monotone());
        EXPECT_EQ(tabulate(t), tabulate(c));
        EXPECT_EQ(corners(c), z);
      }
  }
}

TEST(Properties, MedianOfThreeProjectionsIsExtendedMedian) {
  auto l = share(boolean_square());
  ExplicitRule m = pointwise_median(projection_rule(l, 3, 0), projection_rule(l, 3, 1), projection_rule(l, 3, 2));
  EXPECT_EQ(m, tabulate(extended_median_rule(l, 3)));
  ExplicitRule c = pointwise_median(constant_rule(l, 3, 0), projection_rule(l, 3, 0), constant_rule(l, 3, 3));
  EXPECT_EQ(c, tabulate(projection_rule(l, 3, 0)));
}

TEST(Tabulate, RoundTripThroughExplicit) {
  auto l = share(build_chain(3));
  ExplicitRule t = tabulate(extended_median_rule(l, 3));
  EXPECT_EQ(tabulate(t), t);
  EXPECT_EQ(t.table().size(), 27u);
  for_each_profile(*l, 3, [&](const Ballots& b) { EXPECT_EQ(t(b), extended_median(*l, b)); });
}
