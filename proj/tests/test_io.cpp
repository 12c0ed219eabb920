#include <gtest/gtest.h>

#include <random>

#include "medlat/io.hpp"
#include "medlat/verify.hpp"

using namespace medlat;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidSize;  // sentinel: nothing thrown
}

std::string data(const std::string& name) { return std::string(MEDLAT_DATA_DIR) + "/" + name; }

LatticePtr load(const std::string& name) { return share(io::lattice_from_json(io::read_file(data(name)))); }

// Same elements by name with the same order relation.
bool same_lattice(const Lattice& a, const Lattice& b) {
  if (a.size() != b.size()) return false;
  for (ElementId x = 0; x < a.size(); ++x)
    for (ElementId y = 0; y < a.size(); ++y)
      if (a.leq(x, y) != b.leq(b.id(a.name(x)), b.id(a.name(y)))) return false;
  return true;
}

}  // namespace

TEST(Io, BundledLattices) {
  auto sq = load("boolean_square.json");
  EXPECT_EQ(sq->size(), 4u);
  ASSERT_EQ(sq->atoms().size(), 2u);
  EXPECT_EQ(sq->name(sq->atoms()[0]), "x");
  EXPECT_EQ(sq->name(sq->atoms()[1]), "y");
  EXPECT_TRUE(load("chain4.json")->is_chain());
  EXPECT_TRUE(load("cube3.json")->is_boolean());
  EXPECT_EQ(load("cube3.json")->size(), 8u);
  EXPECT_EQ(load("grid3x3.json")->size(), 9u);
  EXPECT_TRUE(same_lattice(*load("cube3.json"), build_boolean_hypercube(3)));
}

TEST(Io, LatticeRoundTripAndCanonicalOrder) {
  for (const auto& l : {boolean_square(), build_chain(5), build_boolean_hypercube(3),
                        build_product(build_chain(3), build_chain(2))}) {
    const auto j = io::lattice_to_json(l);
    const Lattice back = io::lattice_from_json(j);
    EXPECT_TRUE(same_lattice(l, back));
    EXPECT_EQ(io::lattice_to_json(back), j);
  }
  // Topological, ties by name: bottom first, then x before y.
  auto j = io::lattice_to_json(build_from_covers({"1", "y", "x", "0"}, {{"0", "y"}, {"0", "x"}, {"x", "1"}, {"y", "1"}}));
  EXPECT_EQ(j["names"], io::json({"0", "x", "y", "1"}));
  EXPECT_EQ(j["covers"][0], io::json({"0", "x"}));
}

TEST(Io, LatticeDiagnostics) {
  EXPECT_EQ(kind_of([] { io::lattice_from_json(io::parse_text(R"({"names":["a","b"],"covers":[["a","b"],["b","a"]]})")); }),
            ErrorKind::NotAPoset);
  EXPECT_EQ(kind_of([] { io::lattice_from_json(io::parse_text(R"({"names":["a"],"covers":[["a","q"]]})")); }),
            ErrorKind::UnknownElement);
  EXPECT_EQ(kind_of([] { io::lattice_from_json(io::parse_text(R"({"names":["a"]})")); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { io::parse_text("{not json"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { io::read_file("/nonexistent/file.json"); }), ErrorKind::ParseError);
  try {
    io::lattice_from_json(io::parse_text(R"({"names":["a"]})"));
  } catch (const Error& e) {
    EXPECT_EQ(e.witness(), std::vector<std::string>{"covers"});
  }
}

TEST(Io, PreorderRoundTrip) {
  auto sq = load("boolean_square.json");
  auto p = io::preorder_from_json(io::read_file(data("pref_x.json")), *sq);
  EXPECT_EQ(p.top(), sq->id("x"));
  EXPECT_TRUE(is_unimodal(p, *sq));
  EXPECT_EQ(io::preorder_to_json(p, *sq), io::json::parse(R"([["x"],["1"],["0","y"]])"));
  for (const auto& q : enumerate_topped_preorders(*sq))
    EXPECT_EQ(io::preorder_from_json(io::preorder_to_json(q, *sq), *sq), q);
  EXPECT_EQ(kind_of([&] { io::preorder_from_json(io::parse_text(R"([["x","y"],["0","1"]])"), *sq); }),
            ErrorKind::NotTopped);
  EXPECT_EQ(kind_of([&] { io::preorder_from_json(io::parse_text(R"([["x"],["1"]])"), *sq); }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([&] { io::preorder_from_json(io::parse_text(R"([["x"],["w"]])"), *sq); }),
            ErrorKind::UnknownElement);
}

TEST(Io, BundledRules) {
  auto sq = load("boolean_square.json");
  auto maj = io::rule_from_json(io::read_file(data("majority5.json")), sq);
  ASSERT_EQ(io::kind_of(maj), "committee");
  EXPECT_EQ(io::tabulate_any(maj), tabulate(extended_median_rule(sq, 5)));
  const ElementId x = sq->id("x"), y = sq->id("y"), z = sq->id("0");
  EXPECT_EQ(io::eval_any(maj, Ballots{x, x, y, y, z}), z);

  auto t2 = io::rule_from_json(io::read_file(data("square_tree.json")), sq);
  ASSERT_EQ(io::kind_of(t2), "tree");
  EXPECT_EQ(io::eval_any(t2, Ballots{z, y}), y);

  auto c4 = load("chain4.json");
  auto r3 = io::tabulate_any(io::rule_from_json(io::read_file(data("restricted_rule.json")), c4));
  EXPECT_EQ(r3(Ballots{c4->id("d"), c4->id("a")}), c4->id("c"));
  EXPECT_FALSE(is_b_monotonic(r3).holds);
}

TEST(Io, RuleRoundTrips) {
  std::mt19937 rng(17);
  auto l = share(boolean_square());
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    std::vector<ElementId> z(std::size_t{1} << n);
    for (auto& v : z) v = static_cast<ElementId>(rng() % l->size());
    MedianTree t = build_canonical_median_tree(l, z, n);
    auto tj = io::rule_to_json(t);
    EXPECT_EQ(io::rule_to_json(io::rule_from_json(tj, l)), tj);
    EXPECT_EQ(io::tabulate_any(io::rule_from_json(tj, l)), tabulate(t));

    CommitteeRule c = tree_to_committee(t);
    auto cj = io::rule_to_json(c);
    auto cback = io::rule_from_json(cj, l);
    EXPECT_EQ(std::get<CommitteeRule>(cback), c);

    ExplicitRule e = tabulate(t);
    auto ej = io::rule_to_json(e);
    EXPECT_EQ(std::get<ExplicitRule>(io::rule_from_json(ej, l)), e);
  }
  ExplicitRule partial(l, {{0, 3}, {1}}, {0, 3});
  EXPECT_EQ(std::get<ExplicitRule>(io::rule_from_json(io::rule_to_json(partial), l)), partial);
}

TEST(Io, RuleDiagnostics) {
  auto l = share(boolean_square());
  auto bad = [&](const char* text) { return kind_of([&] { io::rule_from_json(io::parse_text(text), l); }); };
  EXPECT_EQ(bad(R"({"kind":"committee","n":5,"terms":[{"coalition":[1,7],"constant":"1"}]})"), ErrorKind::ArityMismatch);
  EXPECT_EQ(bad(R"({"kind":"committee","n":2,"terms":[{"coalition":[1],"constant":"q"}]})"), ErrorKind::UnknownElement);
  EXPECT_EQ(bad(R"({"kind":"tree","n":2,"corners":["0","1"]})"), ErrorKind::ArityMismatch);
  EXPECT_EQ(bad(R"({"kind":"explicit","ballot_spaces":[["0","1"]],"table":["0"]})"), ErrorKind::InvalidInput);
  EXPECT_EQ(bad(R"({"kind":"explicit","n":3,"ballot_spaces":[["0"]],"table":["0"]})"), ErrorKind::ArityMismatch);
  EXPECT_EQ(bad(R"({"kind":"poly","n":1})"), ErrorKind::ParseError);
  EXPECT_EQ(bad(R"({"n":1})"), ErrorKind::ParseError);
  EXPECT_EQ(bad(R"({"kind":"tree","n":-1,"corners":[]})"), ErrorKind::ParseError);
}
