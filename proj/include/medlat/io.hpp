#pragma once

#include <fstream>
#include <queue>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "medlat/error.hpp"
#include "medlat/lattice.hpp"
#include "medlat/preorder.hpp"
#include "medlat/rules.hpp"

namespace medlat::io {

using json = nlohmann::ordered_json;

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read '" + path + "'", {path});
  std::ostringstream os;
  os << in.rdbuf();
  return parse_text(os.str());
}

inline void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write '" + path + "'", {path});
  out << j.dump(2) << "\n";
}

namespace detail {

inline const json& field(const json& j, const std::string& key) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "expected an object with field '" + key + "'", {key});
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::ParseError, "missing field '" + key + "'", {key});
  return *it;
}

inline const json& array_of(const json& j, const std::string& what) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "'" + what + "' must be an array", {what});
  return j;
}

inline std::string string_of(const json& j, const std::string& what) {
  if (!j.is_string()) throw Error(ErrorKind::ParseError, "'" + what + "' must be a string", {what});
  return j.get<std::string>();
}

inline std::size_t size_of(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw Error(ErrorKind::ParseError, "'" + what + "' must be a nonnegative integer", {what});
  return j.get<std::size_t>();
}

inline std::vector<ElementId> elements_of(const json& j, const Lattice& l, const std::string& what) {
  std::vector<ElementId> out;
  for (const auto& e : array_of(j, what)) out.push_back(l.id(string_of(e, what)));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lattices

inline Lattice lattice_from_json(const json& j, const LatticeOptions& opts = {}) {
  std::vector<std::string> names;
  for (const auto& n : detail::array_of(detail::field(j, "names"), "names"))
    names.push_back(detail::string_of(n, "names"));
  std::vector<std::pair<std::string, std::string>> covers;
  for (const auto& c : detail::array_of(detail::field(j, "covers"), "covers")) {
    if (!c.is_array() || c.size() != 2) throw Error(ErrorKind::ParseError, "each cover is a [lower, upper] pair", {"covers"});
    covers.emplace_back(detail::string_of(c[0], "covers"), detail::string_of(c[1], "covers"));
  }
  return build_from_covers(names, covers, opts);
}

/// Element ids in canonical export order: topological in the cover relation,
/// ties broken by name.
inline std::vector<ElementId> canonical_order(const Lattice& l) {
  const std::size_t m = l.size();
  std::vector<std::size_t> indeg(m, 0);
  const auto covers = l.covers();
  for (auto [a, b] : covers) ++indeg[b];
  auto by_name = [&](ElementId a, ElementId b) { return l.name(a) > l.name(b); };
  std::priority_queue<ElementId, std::vector<ElementId>, decltype(by_name)> ready(by_name);
  for (ElementId a = 0; a < m; ++a)
    if (indeg[a] == 0) ready.push(a);
  std::vector<ElementId> order;
  while (!ready.empty()) {
    ElementId a = ready.top();
    ready.pop();
    order.push_back(a);
    for (auto [lo, hi] : covers)
      if (lo == a && --indeg[hi] == 0) ready.push(hi);
  }
  return order;
}

inline json lattice_to_json(const Lattice& l) {
  const auto order = canonical_order(l);
  std::vector<std::size_t> pos(l.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  auto covers = l.covers();
  std::sort(covers.begin(), covers.end(), [&](auto x, auto y) {
    return std::pair{pos[x.first], pos[x.second]} < std::pair{pos[y.first], pos[y.second]};
  });
  json names = json::array(), edges = json::array();
  for (ElementId a : order) names.push_back(l.name(a));
  for (auto [a, b] : covers) edges.push_back({l.name(a), l.name(b)});
  return {{"names", names}, {"covers", edges}};
}

// ---------------------------------------------------------------------------
// Preorders

inline TotalPreorder preorder_from_json(const json& j, const Lattice& l) {
  std::vector<std::vector<ElementId>> classes;
  for (const auto& cls : detail::array_of(j, "preorder")) classes.push_back(detail::elements_of(cls, l, "preorder"));
  return TotalPreorder::from_classes(l.size(), classes);
}

inline json preorder_to_json(const TotalPreorder& p, const Lattice& l) {
  json out = json::array();
  for (const auto& cls : p.classes()) {
    json c = json::array();
    for (ElementId e : cls) c.push_back(l.name(e));
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rules

using AnyRule = std::variant<ExplicitRule, CommitteeRule, MedianTree>;

inline ExplicitRule explicit_from_json(const json& j, LatticePtr l) {
  BallotSpaces spaces;
  for (const auto& s : detail::array_of(detail::field(j, "ballot_spaces"), "ballot_spaces"))
    spaces.push_back(detail::elements_of(s, *l, "ballot_spaces"));
  if (j.contains("n") && detail::size_of(j["n"], "n") != spaces.size())
    throw Error(ErrorKind::ArityMismatch, "'n' differs from the number of ballot spaces", {"n"});
  std::vector<ElementId> table = detail::elements_of(detail::field(j, "table"), *l, "table");
  return ExplicitRule(std::move(l), std::move(spaces), std::move(table));
}

inline CommitteeRule committee_from_json(const json& j, LatticePtr l) {
  const std::size_t n = detail::size_of(detail::field(j, "n"), "n");
  if (n == 0 || n > kMaxVoters) throw Error(ErrorKind::InvalidInput, "voter count out of range", {"n"});
  std::vector<CommitteeTerm> terms;
  for (const auto& t : detail::array_of(detail::field(j, "terms"), "terms")) {
    Coalition c = 0;
    for (const auto& v : detail::array_of(detail::field(t, "coalition"), "coalition")) {
      const std::size_t id = detail::size_of(v, "coalition");
      if (id == 0 || id > n)
        throw Error(ErrorKind::ArityMismatch,
                    "coalition names voter " + std::to_string(id) + " but n=" + std::to_string(n),
                    {std::to_string(id)});
      c |= Coalition{1} << (id - 1);
    }
    terms.push_back({c, l->id(detail::string_of(detail::field(t, "constant"), "constant"))});
  }
  return CommitteeRule(std::move(l), n, std::move(terms));
}

inline MedianTree tree_from_json(const json& j, LatticePtr l) {
  const std::size_t n = detail::size_of(detail::field(j, "n"), "n");
  if (n == 0 || n > kMaxVoters) throw Error(ErrorKind::InvalidInput, "voter count out of range", {"n"});
  auto z = detail::elements_of(detail::field(j, "corners"), *l, "corners");
  if (z.size() != (std::size_t{1} << n))
    throw Error(ErrorKind::ArityMismatch,
                "expected " + std::to_string(std::size_t{1} << n) + " corner values, got " + std::to_string(z.size()),
                {"corners"});
  return build_canonical_median_tree(std::move(l), z, n);
}

inline AnyRule rule_from_json(const json& j, LatticePtr l) {
  const std::string kind = detail::string_of(detail::field(j, "kind"), "kind");
  if (kind == "explicit") return explicit_from_json(j, std::move(l));
  if (kind == "committee") return committee_from_json(j, std::move(l));
  if (kind == "tree") return tree_from_json(j, std::move(l));
  throw Error(ErrorKind::ParseError, "unknown rule kind '" + kind + "'", {kind});
}

inline json rule_to_json(const ExplicitRule& r) {
  const Lattice& l = r.lattice();
  json spaces = json::array(), table = json::array();
  for (const auto& s : r.ballot_spaces()) {
    json a = json::array();
    for (ElementId e : s) a.push_back(l.name(e));
    spaces.push_back(a);
  }
  for (ElementId e : r.table()) table.push_back(l.name(e));
  return {{"kind", "explicit"}, {"n", r.voters()}, {"ballot_spaces", spaces}, {"table", table}};
}

inline json rule_to_json(const CommitteeRule& r) {
  json terms = json::array();
  for (const auto& t : r.terms()) {
    json members = json::array();
    for (std::size_t i = 0; i < r.voters(); ++i)
      if ((t.coalition >> i) & 1) members.push_back(i + 1);
    terms.push_back({{"coalition", members}, {"constant", r.lattice().name(t.constant)}});
  }
  return {{"kind", "committee"}, {"n", r.voters()}, {"terms", terms}};
}

/// Trees are stored by their corner values; any median tree is determined by them.
inline json rule_to_json(const MedianTree& t) {
  json z = json::array();
  for (ElementId e : corners(t)) z.push_back(t.lattice().name(e));
  return {{"kind", "tree"}, {"n", t.voters()}, {"corners", z}};
}

inline json rule_to_json(const AnyRule& r) {
  return std::visit([](const auto& x) { return rule_to_json(x); }, r);
}

inline ExplicitRule tabulate_any(const AnyRule& r) {
  return std::visit([](const auto& x) { return tabulate(x); }, r);
}

inline std::size_t voters_of(const AnyRule& r) {
  return std::visit([](const auto& x) { return x.voters(); }, r);
}

inline ElementId eval_any(const AnyRule& r, std::span<const ElementId> ballots) {
  return std::visit([&](const auto& x) { return x(ballots); }, r);
}

inline std::string kind_of(const AnyRule& r) {
  static const char* names[] = {"explicit", "committee", "tree"};
  return names[r.index()];
}

}  // namespace medlat::io
