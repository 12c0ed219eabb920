#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "medlat/error.hpp"

namespace medlat {

using ElementId = std::uint32_t;
using Bits = boost::dynamic_bitset<>;

struct LatticeOptions {
  std::size_t max_size = 4096;
};

/// Finite bounded distributive lattice. The order is kept as bitset rows in
/// both directions and join/meet are fully tabulated at construction.
class Lattice {
 public:
  /// Validates `up` (row a = {b : a <= b}) and builds all derived tables.
  static Lattice from_order(std::vector<std::string> names, std::vector<Bits> up,
                            const LatticeOptions& opts = {}) {
    Lattice l;
    l.init(std::move(names), std::move(up), opts);
    return l;
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(ElementId a) const { return names_.at(a); }

  std::optional<ElementId> find(const std::string& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  ElementId id(const std::string& n) const {
    auto found = find(n);
    if (!found) throw Error(ErrorKind::UnknownElement, "unknown element '" + n + "'", {n});
    return *found;
  }

  bool leq(ElementId a, ElementId b) const { return up_[a].test(b); }
  bool lt(ElementId a, ElementId b) const { return a != b && up_[a].test(b); }
  bool comparable(ElementId a, ElementId b) const { return leq(a, b) || leq(b, a); }
  ElementId join(ElementId a, ElementId b) const { return join_[a * size() + b]; }
  ElementId meet(ElementId a, ElementId b) const { return meet_[a * size() + b]; }
  ElementId bottom() const noexcept { return bottom_; }
  ElementId top() const noexcept { return top_; }

  const Bits& up_set(ElementId a) const { return up_[a]; }
  const Bits& down_set(ElementId a) const { return down_[a]; }
  const std::vector<ElementId>& lower_covers(ElementId a) const { return lower_covers_[a]; }
  const std::vector<ElementId>& atoms() const noexcept { return atoms_; }
  const std::vector<ElementId>& join_irreducibles() const noexcept { return join_irreducibles_; }

  bool is_join_irreducible(ElementId a) const { return lower_covers_[a].size() == 1; }

  /// Cover pairs (lower, upper) in id order of the upper element.
  std::vector<std::pair<ElementId, ElementId>> covers() const {
    std::vector<std::pair<ElementId, ElementId>> out;
    for (ElementId u = 0; u < size(); ++u)
      for (ElementId l : lower_covers_[u]) out.emplace_back(l, u);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool is_chain() const {
    for (ElementId a = 0; a < size(); ++a)
      if (up_[a].count() + down_[a].count() != size() + 1) return false;
    return true;
  }

  /// Every element has a complement.
  bool is_boolean() const {
    for (ElementId a = 0; a < size(); ++a) {
      bool found = false;
      for (ElementId b = 0; b < size() && !found; ++b)
        found = join(a, b) == top_ && meet(a, b) == bottom_;
      if (!found) return false;
    }
    return true;
  }

  std::optional<ElementId> complement(ElementId a) const {
    for (ElementId b = 0; b < size(); ++b)
      if (join(a, b) == top_ && meet(a, b) == bottom_) return b;
    return std::nullopt;
  }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.names_ == b.names_ && a.up_ == b.up_;
  }

 private:
  Lattice() = default;

  void init(std::vector<std::string> names, std::vector<Bits> up, const LatticeOptions& opts);
  void check_poset() const;
  void compute_bounds();
  void compute_operations();
  void compute_covers();
  void check_distributive() const;

  std::vector<std::string> names_;
  std::map<std::string, ElementId> index_;
  std::vector<Bits> up_;
  std::vector<Bits> down_;
  std::vector<ElementId> join_;
  std::vector<ElementId> meet_;
  std::vector<std::vector<ElementId>> lower_covers_;
  std::vector<ElementId> atoms_;
  std::vector<ElementId> join_irreducibles_;
  ElementId bottom_ = 0;
  ElementId top_ = 0;
};

inline void Lattice::init(std::vector<std::string> names, std::vector<Bits> up,
                          const LatticeOptions& opts) {
  const std::size_t m = names.size();
  if (m == 0) throw Error(ErrorKind::InvalidSize, "lattice must have at least one element");
  if (m > opts.max_size)
    throw Error(ErrorKind::TooLarge, std::to_string(m) + " elements exceeds cap " +
                                         std::to_string(opts.max_size));
  if (up.size() != m) throw Error(ErrorKind::InvalidInput, "order matrix has wrong row count");
  for (const auto& row : up)
    if (row.size() != m) throw Error(ErrorKind::InvalidInput, "order matrix has wrong width");
  names_ = std::move(names);
  for (ElementId a = 0; a < m; ++a) {
    if (!index_.emplace(names_[a], a).second)
      throw Error(ErrorKind::InvalidInput, "duplicate element name '" + names_[a] + "'",
                  {names_[a]});
  }
  up_ = std::move(up);
  down_.assign(m, Bits(m));
  for (ElementId a = 0; a < m; ++a)
    for (ElementId b = 0; b < m; ++b)
      if (up_[a].test(b)) down_[b].set(a);

  check_poset();
  compute_bounds();
  compute_operations();
  compute_covers();
  check_distributive();
}

inline void Lattice::check_poset() const {
  const std::size_t m = size();
  for (ElementId a = 0; a < m; ++a)
    if (!up_[a].test(a))
      throw Error(ErrorKind::NotAPoset, "order is not reflexive at '" + names_[a] + "'",
                  {names_[a]});
  for (ElementId a = 0; a < m; ++a)
    for (ElementId b = a + 1; b < m; ++b)
      if (up_[a].test(b) && up_[b].test(a))
        throw Error(ErrorKind::NotAPoset, "order is not antisymmetric", {names_[a], names_[b]});
  // Transitivity: every b above a must have its up-set inside up[a].
  for (ElementId a = 0; a < m; ++a)
    for (ElementId b = 0; b < m; ++b)
      if (up_[a].test(b) && !up_[b].is_subset_of(up_[a])) {
        Bits missing = up_[b] - up_[a];
        ElementId c = static_cast<ElementId>(missing.find_first());
        throw Error(ErrorKind::NotAPoset, "order is not transitive",
                    {names_[a], names_[b], names_[c]});
      }
}

inline void Lattice::compute_bounds() {
  const std::size_t m = size();
  bool have_bottom = false, have_top = false;
  for (ElementId a = 0; a < m; ++a) {
    if (up_[a].count() == m) bottom_ = a, have_bottom = true;
    if (down_[a].count() == m) top_ = a, have_top = true;
  }
  if (!have_bottom || !have_top)
    throw Error(ErrorKind::NotBounded,
                std::string("order has no ") + (!have_bottom ? "least" : "greatest") + " element");
}

inline void Lattice::compute_operations() {
  const std::size_t m = size();
  join_.assign(m * m, 0);
  meet_.assign(m * m, 0);
  // The least upper bound u of a set UB of upper bounds satisfies up[u] == UB.
  auto least_in = [&](const Bits& ub, const std::vector<Bits>& rows) -> std::optional<ElementId> {
    const std::size_t want = ub.count();
    for (auto u = ub.find_first(); u != Bits::npos; u = ub.find_next(u))
      if (rows[u].count() == want) return static_cast<ElementId>(u);
    return std::nullopt;
  };
  for (ElementId a = 0; a < m; ++a) {
    for (ElementId b = a; b < m; ++b) {
      auto j = least_in(up_[a] & up_[b], up_);
      if (!j) throw Error(ErrorKind::NotALattice, "pair has no least upper bound",
                          {names_[a], names_[b]});
      auto mt = least_in(down_[a] & down_[b], down_);
      if (!mt) throw Error(ErrorKind::NotALattice, "pair has no greatest lower bound",
                           {names_[a], names_[b]});
      join_[a * m + b] = join_[b * m + a] = *j;
      meet_[a * m + b] = meet_[b * m + a] = *mt;
    }
  }
}

inline void Lattice::compute_covers() {
  const std::size_t m = size();
  lower_covers_.assign(m, {});
  for (ElementId a = 0; a < m; ++a)
    for (ElementId b = 0; b < m; ++b)
      if (b != a && up_[b].test(a) && (up_[b] & down_[a]).count() == 2)
        lower_covers_[a].push_back(b);
  atoms_.clear();
  join_irreducibles_.clear();
  for (ElementId a = 0; a < m; ++a) {
    if (lower_covers_[a].size() == 1) join_irreducibles_.push_back(a);
    if (lower_covers_[a].size() == 1 && lower_covers_[a][0] == bottom_) atoms_.push_back(a);
  }
}

inline void Lattice::check_distributive() const {
  const std::size_t m = size();
  // A finite lattice is distributive iff every join-irreducible is join-prime.
  bool ok = true;
  for (ElementId j : join_irreducibles_) {
    for (ElementId a = 0; a < m && ok; ++a)
      for (ElementId b = a + 1; b < m && ok; ++b)
        if (leq(j, join(a, b)) && !leq(j, a) && !leq(j, b)) ok = false;
    if (!ok) break;
  }
  if (ok) return;
  for (ElementId a = 0; a < m; ++a)
    for (ElementId b = 0; b < m; ++b)
      for (ElementId c = 0; c < m; ++c)
        if (meet(a, join(b, c)) != join(meet(a, b), meet(a, c)))
          throw Error(ErrorKind::NotDistributive, "meet does not distribute over join",
                      {names_[a], names_[b], names_[c]});
}

namespace detail {

inline std::vector<Bits> identity_rows(std::size_t m) {
  std::vector<Bits> rows(m, Bits(m));
  for (std::size_t a = 0; a < m; ++a) rows[a].set(a);
  return rows;
}

}  // namespace detail

/// Builds a lattice from its Hasse diagram. Element ids follow `names`.
inline Lattice build_from_covers(const std::vector<std::string>& names,
                                 const std::vector<std::pair<std::string, std::string>>& covers,
                                 const LatticeOptions& opts = {}) {
  const std::size_t m = names.size();
  if (m == 0) throw Error(ErrorKind::InvalidSize, "lattice must have at least one element");
  if (m > opts.max_size)
    throw Error(ErrorKind::TooLarge, std::to_string(m) + " elements exceeds cap " +
                                         std::to_string(opts.max_size));
  std::map<std::string, ElementId> index;
  for (ElementId a = 0; a < m; ++a)
    if (!index.emplace(names[a], a).second)
      throw Error(ErrorKind::InvalidInput, "duplicate element name '" + names[a] + "'",
                  {names[a]});
  auto lookup = [&](const std::string& n) {
    auto it = index.find(n);
    if (it == index.end()) throw Error(ErrorKind::UnknownElement, "unknown element '" + n + "'", {n});
    return it->second;
  };

  std::vector<std::vector<ElementId>> succ(m);
  std::vector<std::pair<ElementId, ElementId>> edges;
  for (const auto& [lo, hi] : covers) {
    ElementId a = lookup(lo), b = lookup(hi);
    if (a == b) throw Error(ErrorKind::NotAPoset, "self-loop in cover relation", {lo, hi});
    if (std::find(succ[a].begin(), succ[a].end(), b) != succ[a].end())
      throw Error(ErrorKind::RedundantCover, "duplicate cover edge", {lo, hi});
    succ[a].push_back(b);
    edges.emplace_back(a, b);
  }

  // Kahn's algorithm detects cycles and yields an order for the closure.
  std::vector<std::size_t> indeg(m, 0);
  for (auto [a, b] : edges) ++indeg[b];
  std::vector<ElementId> order;
  std::queue<ElementId> ready;
  for (ElementId a = 0; a < m; ++a)
    if (indeg[a] == 0) ready.push(a);
  while (!ready.empty()) {
    ElementId a = ready.front();
    ready.pop();
    order.push_back(a);
    for (ElementId b : succ[a])
      if (--indeg[b] == 0) ready.push(b);
  }
  if (order.size() != m) {
    for (ElementId a = 0; a < m; ++a)
      if (indeg[a] != 0) throw Error(ErrorKind::NotAPoset, "cover relation has a cycle", {names[a]});
  }

  std::vector<Bits> up = detail::identity_rows(m);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    for (ElementId b : succ[*it]) up[*it] |= up[b];

  // An edge a -> b is redundant when b is reachable through another successor.
  for (auto [a, b] : edges)
    for (ElementId c : succ[a])
      if (c != b && up[c].test(b))
        throw Error(ErrorKind::RedundantCover, "edge is implied by transitivity",
                    {names[a], names[b]});

  return Lattice::from_order(names, std::move(up), opts);
}

inline Lattice build_chain(std::size_t m, const LatticeOptions& opts = {}) {
  if (m == 0) throw Error(ErrorKind::InvalidSize, "chain must have at least one element");
  if (m > opts.max_size)
    throw Error(ErrorKind::TooLarge, std::to_string(m) + " elements exceeds cap " +
                                         std::to_string(opts.max_size));
  std::vector<std::string> names;
  std::vector<Bits> up(m, Bits(m));
  for (std::size_t a = 0; a < m; ++a) {
    names.push_back(std::to_string(a));
    for (std::size_t b = a; b < m; ++b) up[a].set(b);
  }
  return Lattice::from_order(std::move(names), std::move(up), opts);
}

/// Element ids are bitmasks: bit i holds coordinate i+1. Names spell the
/// coordinates left to right, so "10" is (1,0).
inline Lattice build_boolean_hypercube(std::size_t k, const LatticeOptions& opts = {}) {
  if (k == 0) throw Error(ErrorKind::InvalidSize, "hypercube dimension must be at least 1");
  if (k >= 31 || (std::size_t{1} << k) > opts.max_size)
    throw Error(ErrorKind::TooLarge, "2^" + std::to_string(k) + " elements exceeds cap " +
                                         std::to_string(opts.max_size));
  const std::size_t m = std::size_t{1} << k;
  std::vector<std::string> names(m);
  std::vector<Bits> up(m, Bits(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t i = 0; i < k; ++i) names[a].push_back(((a >> i) & 1) ? '1' : '0');
    for (std::size_t b = 0; b < m; ++b)
      if ((a & b) == a) up[a].set(b);
  }
  return Lattice::from_order(std::move(names), std::move(up), opts);
}

/// 2x2 with the element names 0, x, y, 1 (ids 0..3, x = (1,0), y = (0,1)).
inline Lattice boolean_square() {
  return build_from_covers({"0", "x", "y", "1"}, {{"0", "x"}, {"0", "y"}, {"x", "1"}, {"y", "1"}});
}

/// Componentwise order. The pair (i, j) gets id i*|b| + j and name "(ai,bj)".
inline Lattice build_product(const Lattice& a, const Lattice& b, const LatticeOptions& opts = {}) {
  const std::size_t ma = a.size(), mb = b.size();
  if (ma * mb > opts.max_size)
    throw Error(ErrorKind::TooLarge, std::to_string(ma * mb) + " elements exceeds cap " +
                                         std::to_string(opts.max_size));
  const std::size_t m = ma * mb;
  std::vector<std::string> names(m);
  std::vector<Bits> up(m, Bits(m));
  for (ElementId i = 0; i < ma; ++i)
    for (ElementId j = 0; j < mb; ++j) {
      names[i * mb + j] = "(" + a.name(i) + "," + b.name(j) + ")";
      for (ElementId k = 0; k < ma; ++k)
        for (ElementId l = 0; l < mb; ++l)
          if (a.leq(i, k) && b.leq(j, l)) up[i * mb + j].set(k * mb + l);
    }
  return Lattice::from_order(std::move(names), std::move(up), opts);
}

/// A finite poset given by element names and strict pairs (lower, upper).
/// The pairs need not be transitively closed.
struct FinitePoset {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> less_than;
};

/// Lattice of order ideals (down-sets) ordered by inclusion. Ideals are
/// sorted by size, then by membership bitmask.
inline Lattice build_ideal_lattice(const FinitePoset& poset, const LatticeOptions& opts = {}) {
  const std::size_t p = poset.names.size();
  if (p > 63) throw Error(ErrorKind::TooLarge, "poset has more than 63 elements");
  std::map<std::string, std::size_t> index;
  for (std::size_t a = 0; a < p; ++a)
    if (!index.emplace(poset.names[a], a).second)
      throw Error(ErrorKind::InvalidInput, "duplicate poset element '" + poset.names[a] + "'",
                  {poset.names[a]});
  auto lookup = [&](const std::string& n) {
    auto it = index.find(n);
    if (it == index.end()) throw Error(ErrorKind::UnknownElement, "unknown element '" + n + "'", {n});
    return it->second;
  };
  // below[a] = strict down-set of a, closed transitively.
  std::vector<std::uint64_t> below(p, 0);
  for (const auto& [lo, hi] : poset.less_than) {
    std::size_t a = lookup(lo), b = lookup(hi);
    if (a == b) throw Error(ErrorKind::NotAPoset, "strict order is reflexive", {lo, hi});
    below[b] |= std::uint64_t{1} << a;
  }
  for (std::size_t round = 0; round < p; ++round)
    for (std::size_t b = 0; b < p; ++b)
      for (std::size_t a = 0; a < p; ++a)
        if ((below[b] >> a) & 1) below[b] |= below[a];
  for (std::size_t a = 0; a < p; ++a)
    if ((below[a] >> a) & 1)
      throw Error(ErrorKind::NotAPoset, "strict order has a cycle", {poset.names[a]});

  std::vector<std::size_t> topo(p);
  std::iota(topo.begin(), topo.end(), 0);
  std::stable_sort(topo.begin(), topo.end(), [&](std::size_t a, std::size_t b) {
    return std::popcount(below[a]) < std::popcount(below[b]);
  });

  std::vector<std::uint64_t> ideals;
  auto rec = [&](auto&& self, std::size_t pos, std::uint64_t cur) -> void {
    if (pos == p) {
      if (ideals.size() >= opts.max_size)
        throw Error(ErrorKind::TooLarge, "ideal count exceeds cap " + std::to_string(opts.max_size));
      ideals.push_back(cur);
      return;
    }
    std::size_t e = topo[pos];
    self(self, pos + 1, cur);
    if ((below[e] & ~cur) == 0) self(self, pos + 1, cur | (std::uint64_t{1} << e));
  };
  rec(rec, 0, 0);
  std::sort(ideals.begin(), ideals.end(), [](std::uint64_t a, std::uint64_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });

  const std::size_t m = ideals.size();
  std::vector<std::string> names(m);
  std::vector<Bits> up(m, Bits(m));
  for (std::size_t i = 0; i < m; ++i) {
    std::string n = "{";
    bool first = true;
    for (std::size_t a = 0; a < p; ++a)
      if ((ideals[i] >> a) & 1) {
        if (!first) n += ",";
        n += poset.names[a];
        first = false;
      }
    names[i] = n + "}";
    for (std::size_t j = 0; j < m; ++j)
      if ((ideals[i] & ~ideals[j]) == 0) up[i].set(j);
  }
  return Lattice::from_order(std::move(names), std::move(up), opts);
}

/// The sublattice on `members` (must be closed under join and meet).
/// Ids follow the order of `members`; names are kept.
inline Lattice induced_sublattice(const Lattice& l, const std::vector<ElementId>& members) {
  const std::size_t m = members.size();
  std::vector<std::string> names;
  std::vector<Bits> up(m, Bits(m));
  for (std::size_t i = 0; i < m; ++i) {
    names.push_back(l.name(members[i]));
    for (std::size_t j = 0; j < m; ++j) {
      if (l.leq(members[i], members[j])) up[i].set(j);
      auto inside = [&](ElementId e) {
        return std::find(members.begin(), members.end(), e) != members.end();
      };
      if (!inside(l.join(members[i], members[j])) || !inside(l.meet(members[i], members[j])))
        throw Error(ErrorKind::InvalidInput, "subset is not closed under join and meet",
                    {l.name(members[i]), l.name(members[j])});
    }
  }
  return Lattice::from_order(std::move(names), std::move(up));
}

/// (a and b) or (b and c) or (a and c).
inline ElementId median(const Lattice& l, ElementId a, ElementId b, ElementId c) {
  return l.join(l.join(l.meet(a, b), l.meet(b, c)), l.meet(a, c));
}

/// z lies in the interval spanned by x and y.
inline bool between(const Lattice& l, ElementId x, ElementId z, ElementId y) {
  return l.leq(l.meet(x, y), z) && l.leq(z, l.join(x, y));
}

/// Elements of [x, y] in id order.
inline std::vector<ElementId> interval(const Lattice& l, ElementId x, ElementId y) {
  Bits set = l.up_set(l.meet(x, y)) & l.down_set(l.join(x, y));
  std::vector<ElementId> out;
  for (auto z = set.find_first(); z != Bits::npos; z = set.find_next(z))
    out.push_back(static_cast<ElementId>(z));
  return out;
}

inline Bits interval_bits(const Lattice& l, ElementId x, ElementId y) {
  return l.up_set(l.meet(x, y)) & l.down_set(l.join(x, y));
}

struct Valuation {
  std::vector<long> v;
  long operator()(ElementId a) const { return v.at(a); }
};

/// v(x) = number of join-irreducibles below x.
inline Valuation rank_valuation(const Lattice& l) {
  Valuation val;
  val.v.assign(l.size(), 0);
  for (ElementId a = 0; a < l.size(); ++a)
    for (ElementId j : l.join_irreducibles())
      if (l.leq(j, a)) ++val.v[a];
  return val;
}

inline long metric_distance(const Lattice& l, const Valuation& v, ElementId x, ElementId y) {
  return v(l.join(x, y)) - v(l.meet(x, y));
}

}  // namespace medlat
