#include <gtest/gtest.h>

#include "medlat/suites.hpp"

using namespace medlat;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ParseError;
}

void expect_passed(const VerificationReport& r) { EXPECT_TRUE(r.passed()) << r.to_text(false); }

const Check* find_check(const VerificationReport& r, const std::string& claim) {
  for (const auto& c : r.checks())
    if (c.claim == claim) return &c;
  return nullptr;
}

VerifyOptions eight() {
  VerifyOptions o;
  o.enumeration.max_elements = 8;
  return o;
}

LatticePtr grid3() { return share(build_product(build_chain(3), build_chain(3))); }

}  // namespace

TEST(Suites, BooleanSquare) {
  auto r = boolean_square_suite();
  expect_passed(r);
  const Check* w4 = find_check(r, "mu*.coalitional.size4");
  ASSERT_NE(w4, nullptr);
  EXPECT_TRUE(w4->pass);
  const Check* first = find_check(r, "mu*.coalitional.first");
  ASSERT_NE(first, nullptr);
  EXPECT_EQ(first->witness["coalition"].size(), 2u);
}

TEST(Suites, Claim1OnFourLattices) {
  for (auto l : {share(boolean_square()), share(build_boolean_hypercube(3)), share(build_chain(4)), grid3()}) {
    auto r = claim1_suite(*l);
    expect_passed(r);
    EXPECT_EQ(r.checks().size(), 13u);
  }
}

TEST(Suites, Lemma1AndLemma2) {
  for (auto l : {share(boolean_square()), share(build_chain(4))}) {
    expect_passed(lemma1_suite(l, 2, 60, 11));
    expect_passed(lemma2_suite(l, 3));
  }
  expect_passed(lemma2_suite(share(build_boolean_hypercube(3)), 3, eight()));
}

TEST(Suites, Theorem1) {
  auto sq = theorem1_suite(share(boolean_square()), 2, 200, 1, 3);
  expect_passed(sq);
  EXPECT_NE(find_check(sq, "quota_rules/n=3"), nullptr);
  auto chain = theorem1_suite(share(build_chain(4)), 2, 50, 2, 2);
  expect_passed(chain);
  EXPECT_NE(find_check(chain, "embedded_counterexample"), nullptr);
}

TEST(Suites, Theorem2) {
  auto sq = theorem2_suite(share(boolean_square()));
  expect_passed(sq);
  EXPECT_NE(find_check(sq, "ii.table"), nullptr);
  auto chain = theorem2_suite(share(build_chain(4)));
  expect_passed(chain);
  EXPECT_NE(find_check(chain, "i.not_b_monotonic"), nullptr);
  EXPECT_NE(find_check(chain, "ii.chain_exemption"), nullptr);
  expect_passed(theorem2_suite(share(build_boolean_hypercube(3)), eight()));
  expect_passed(theorem2_suite(grid3()));
  EXPECT_EQ(kind_of([] { theorem2_suite(share(build_chain(3))); }), ErrorKind::NoSuitableSublattice);
}

TEST(Suites, Theorem3) {
  auto l = share(boolean_square());
  for (std::size_t n : {2, 3, 4, 5}) expect_passed(theorem3_suite(l, n));
  auto r5 = theorem3_suite(l, 5);
  const Check* maj = find_check(r5, "strict_majority_targeted");
  ASSERT_NE(maj, nullptr);
  EXPECT_TRUE(maj->pass);
  EXPECT_EQ(kind_of([] { theorem3_suite(share(build_chain(4)), 3); }), ErrorKind::NotEnoughAtoms);
}

TEST(Suites, Corollary1) {
  auto l = share(build_chain(4));
  expect_passed(corollary1_suite(l, 2, 100, 5));
  expect_passed(corollary1_suite(l, 3, 10, 5));
  EXPECT_EQ(kind_of([] { corollary1_suite(share(boolean_square()), 2, 1, 0); }), ErrorKind::NotAChain);
}

// Without the chain, monotonic rules can be coalitionally manipulable, so the
// corollary's zero-witness check is not vacuous.
TEST(Suites, CorollaryCheckDetectsWitnesses) {
  auto l = share(boolean_square());
  auto mu = tabulate(extended_median_rule(l, 3));
  EXPECT_TRUE(find_coalitional_manipulation(mu, DomainDescriptor::full_unimodal(*l, 3)).has_value());
}

TEST(Suites, ReportsIndependentOfWorkers) {
  VerifyOptions one, four;
  four.workers = 4;
  auto l = share(boolean_square());
  EXPECT_EQ(boolean_square_suite(one).to_json(false), boolean_square_suite(four).to_json(false));
  EXPECT_EQ(theorem3_suite(l, 4, one).to_json(false), theorem3_suite(l, 4, four).to_json(false));
  EXPECT_EQ(theorem1_suite(l, 2, 30, 9, 2, one).to_json(false), theorem1_suite(l, 2, 30, 9, 2, four).to_json(false));
}

TEST(Suites, SeedReproducible) {
  auto l = share(build_chain(3));
  EXPECT_EQ(lemma1_suite(l, 2, 20, 3).to_json(false), lemma1_suite(l, 2, 20, 3).to_json(false));
}

TEST(Report, JsonAndTextShape) {
  VerificationReport r("demo");
  r.check("ok", true, "fine");
  r.check("bad", false, "broken");
  r.note("hello");
  r.finish();
  auto j = r.to_json();
  EXPECT_EQ(j["suite"], "demo");
  EXPECT_FALSE(j["passed"].get<bool>());
  EXPECT_EQ(j["checks"][1]["witness"], "broken");
  EXPECT_TRUE(j["checks"][0]["witness"].is_null());
  EXPECT_TRUE(j.contains("elapsed_ms"));
  EXPECT_FALSE(r.to_json(false).contains("elapsed_ms"));
  const std::string text = r.to_text(false);
  EXPECT_NE(text.find("== demo: 1/2 checks passed =="), std::string::npos);
  EXPECT_NE(text.find("[FAIL] bad: broken"), std::string::npos);
  EXPECT_NE(text.find("note: hello"), std::string::npos);
  VerificationReport outer("all");
  outer.absorb(r, "demo");
  EXPECT_EQ(outer.checks()[1].claim, "demo/bad");
  EXPECT_EQ(outer.failures(), 1u);
}
